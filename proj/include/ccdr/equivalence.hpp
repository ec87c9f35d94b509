#pragma once

#include <ccdr/graph.hpp>
#include <ccdr/model.hpp>

#include <vector>

namespace ccdr {

/// Largest p accepted by enumerate_equivalence_class (p! factorizations).
inline constexpr Index kMaxEnumerationNodes = 8;

/// The unique DAG compatible with `pi` that reproduces `theta`: factor
/// P_pi Theta = (I - L) D^{-1} (I - L)' and map back with
/// B = P_{pi^-1} L, Omega = P_{pi^-1} D.
WeightedDag decompose_for_permutation(const PrecisionMatrix& theta, const Permutation& pi);

/// True iff P_pi B is strictly lower triangular.
bool is_compatible(const WeightedDag& dag, const Permutation& pi);

/// All DAGs (B, Omega) with Theta(B, Omega) = theta, one per permutation,
/// deduplicated (same support and values within 1e-9). Throws
/// std::invalid_argument when p > kMaxEnumerationNodes.
std::vector<WeightedDag> enumerate_equivalence_class(const PrecisionMatrix& theta);

/// Checks P_pi A = (P_pi L)(P_pi D)(P_pi L)' for A = L D L' within
/// 1e-9 relative Frobenius norm.
bool permuted_cholesky_identity_check(const PrecisionMatrix& theta, const Permutation& pi);

/// Support equal and all weights/variances within `tol`.
bool approx_equal(const WeightedDag& a, const WeightedDag& b, double tol = 1e-9);

} // namespace ccdr
