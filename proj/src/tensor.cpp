#include "confgeo/tensor.hpp"

namespace confgeo {

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Scalar: return "scalar";
    case Shape::Vector: return "vector";
    case Shape::Matrix: return "matrix";
    case Shape::Tensor3: return "tensor3";
  }
  return "?";
}

TensorField<Expr> to_expr_field(const TensorField<RationalForm>& t) {
  return t.map([](const RationalForm& f) { return to_expr(f); });
}

TensorField<RationalForm> normalize_field(const TensorField<Expr>& t) {
  return t.map([](const Expr& e) { return normalize(e); });
}

}  // namespace confgeo
