#include "confgeo/connection.hpp"

namespace confgeo {

ConnectionCoeffs<Expr> connection_coefficients(const OdeSystem& sys, Hm2Reading reading) {
  const auto& c = exact_analysis(sys)->connection(reading);
  ConnectionCoeffs<Expr> out;
  out.A = to_expr_field(c.A);
  out.B = to_expr_field(c.B);
  out.C = to_expr_field(c.C);
  out.Gx = to_expr_field(c.Gx);
  out.E = to_expr_field(c.E);
  out.Fm2 = to_expr_field(c.Fm2);
  out.Fm3 = to_expr_field(c.Fm3);
  out.Hm1 = to_expr_field(c.Hm1);
  out.Hm2 = to_expr_field(c.Hm2);
  out.Hm3 = to_expr_field(c.Hm3);
  out.Gm2 = to_expr_field(c.Gm2);
  out.Gm3 = to_expr_field(c.Gm3);
  out.Hx = to_expr_field(c.Hx);
  return out;
}

}  // namespace confgeo
