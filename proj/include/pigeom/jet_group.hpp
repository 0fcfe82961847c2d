#pragma once

// First-order jets of GL_N over R_pi: tuples (a_0, a_1, ..., a_n) with the
// twisted group law, the group g(S) = Mat_N(S) under a + b + pi a b, and the
// logarithmic derivative of a connection.

#include <vector>

#include "pigeom/connections.hpp"

namespace pigeom {

struct JetPoint {
  Mat<RpiElem> a0;
  std::vector<Mat<RpiElem>> a;
};

JetPoint jet_identity(const RamCtx& R, int N, int n);
JetPoint jet_mul(const RamCtx& R, const JetPoint& x, const JetPoint& y);
JetPoint jet_inv(const RamCtx& R, const JetPoint& x);
// Differences of jet points agree to the precision of their components.
bool jet_equal(const RamCtx& R, const JetPoint& x, const JetPoint& y);

Mat<RpiElem> lie_add(const RamCtx& R, const Mat<RpiElem>& a, const Mat<RpiElem>& b);
Mat<RpiElem> lie_neg(const RamCtx& R, const Mat<RpiElem>& a);
Mat<RpiElem> g_to_G1(const RamCtx& R, const Mat<RpiElem>& a);

// (g^t, delta_1 g^t, ..., delta_n g^t) for the connection with matrices
// Lambda_i at g; delta_i g = g^{(p^s)} (Lambda_i - 1)/pi.
JetPoint jet_of_connection(const RamCtx& R, const Mat<RpiElem>& g, const std::vector<Mat<RpiElem>>& lambdas);
// The g^n-part of D(g^t) D_0(g^t)^{-1}; throws hypothesis_violated unless
// its first component is 1.
std::vector<Mat<RpiElem>> log_derivative(const RamCtx& R, const Mat<RpiElem>& g,
                                         const std::vector<Mat<RpiElem>>& lambdas);

}  // namespace pigeom
