#pragma once

#include <optional>

#include "confgeo/analysis.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/tensor.hpp"

namespace confgeo {

struct HFields {
  TensorField<Expr> hx;   // scalar
  TensorField<Expr> hm1;  // vector
};

HFields h_fields(const OdeSystem& sys);

/// Trace-free part in the lower indices; throws std::invalid_argument if the
/// input is not symmetric in j, k.
TensorField<Expr> trace_free_sym3(const TensorField<Expr>& t);

TensorField<Expr> invariant_I2(const OdeSystem& sys);
TensorField<Expr> invariant_W2(const OdeSystem& sys);
TensorField<Expr> invariant_W3(const OdeSystem& sys, CubeMode cube = CubeMode::Matrix);
TensorField<Expr> invariant_I4(const OdeSystem& sys, I4Variant variant = I4Variant::Connection,
                               Hm2Reading reading = Hm2Reading::Corrected);

/// f^i = 3 q_i sum_j A_j q_j + sum_j B^i_j q_j + C_i with A, B, C free of q.
struct QuadraticFormDecomposition {
  TensorField<Expr> a;  // vector
  TensorField<Expr> b;  // matrix
  TensorField<Expr> c;  // vector
};

/// The decomposition if every f^i has the form above, otherwise nullopt.
std::optional<QuadraticFormDecomposition> match_I2_zero_form(const OdeSystem& sys);

}  // namespace confgeo
