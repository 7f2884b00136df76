#pragma once

// Chevalley-Eilenberg cohomology with adjoint coefficients in degrees 1 and
// 2, and the restricted second cohomology computed as first-order
// deformations of the pair (bracket, p-map) modulo basis transports.

#include <optional>
#include <string>
#include <vector>

#include "rlie/restricted.hpp"

namespace rlie {

/// dim C^q(L, L) = C(n, q) * n
std::size_t cochain_dim(std::size_t n, int q);
/// Index of the cochain e_{a_1} ^ ... ^ e_{a_q} -> e_k (a increasing):
/// rank of the tuple in lexicographic order times n plus k.
std::size_t cochain_index(std::size_t n, const std::vector<std::size_t>& tuple, std::size_t k);

/// Matrix of d^q : C^q -> C^{q+1}, q in {0, 1, 2}, with
///   d0(m)(x) = [x, m]
///   d1(g)(x, y) = [x, g y] - [y, g x] - g[x, y]
///   d2(f)(x, y, z) = [x, f(y,z)] - [y, f(x,z)] + [z, f(x,y)]
///                    - f([x,y], z) + f([x,z], y) - f([y,z], x)
SparseMatrix ce_differential(const LieAlgebra& L, int q);

/// Weight of a cochain basis element: target weight minus the source weights.
Weight cochain_weight(const Grading& G, const std::vector<std::size_t>& tuple, std::size_t k);

struct CochainBlock {
  Weight weight;
  std::vector<std::size_t> domain;    // C^q indices
  std::vector<std::size_t> codomain;  // C^{q+1} indices
  SparseMatrix matrix;                // codomain x domain
};

/// d^q split by cochain weight. Throws PreconditionError when G violates
/// the grading invariant or d^q does not preserve weights.
std::vector<CochainBlock> weight_blocks(const LieAlgebra& L, const Grading& G, int q);

/// dim H^q(L, L) for q in {1, 2} from the full differentials, blockwise
/// when a grading is given. Throws InputError for p <= 3.
std::size_t cohomology_dim(const LieAlgebra& L, int q, const std::optional<Grading>& G = std::nullopt);

/// A first-order deformation: bracket mu + t f and p-map e_i^[p] + t omega_i
/// over F_p[t]/(t^2).
struct RestrictedDeformation {
  Weight weight;
  BracketTable f;
  std::vector<SparseVec> omega;
};

/// Re-checks a deformation over dual numbers: antisymmetry and Jacobi for
/// mu + t f on basis triples, and ad(x^[p]) = (ad x)^p on basis vectors x.
VerificationReport verify_deformation(const RestrictedLieAlgebra& R, const RestrictedDeformation& d);

enum class CohomologyMethod { parametrized, full };

struct CohomologyOptions {
  CohomologyMethod method = CohomologyMethod::parametrized;
  /// Split by the algebra's grading when it has one.
  bool use_grading = true;
  /// Skip blocks on which an inner toral element acts by a nonzero scalar.
  bool skip_inner_torus = true;
  /// Collect representative deformations for the restricted classes.
  bool generators = true;
  /// Only weights listed here are solved (empty: all).
  std::vector<Weight> only_weights;
};

struct BlockStat {
  Weight weight;
  std::size_t unknowns = 0;  // parameters of the linear system
  std::size_t transports = 0;
  std::size_t h1 = 0, h2 = 0, h2_restricted = 0;
  bool skipped = false;
  bool injective = true;  // coboundary part of Z* comes from transports
  double seconds = 0;
};

struct CohomologyReport {
  std::size_t dim = 0;
  std::size_t h1 = 0, h2 = 0, h2_restricted = 0;
  bool restricted = false;
  std::string method;
  std::vector<std::size_t> generating_set;
  std::vector<BlockStat> blocks;
  std::vector<RestrictedDeformation> generators;
  double seconds = 0;
  std::map<std::string, std::string> provenance;
};

/// h1 and h2 of L with adjoint coefficients.
CohomologyReport lie_cohomology(const LieAlgebra& L, const CohomologyOptions& opts = {});
/// h1, h2 and h2*. Throws PreconditionError for a nonzero center and
/// InputError for p < 5.
CohomologyReport restricted_h2(const RestrictedLieAlgebra& R, const CohomologyOptions& opts = {});

struct ConsistencyReport {
  bool ok = true;
  std::vector<std::string> checks;
  std::vector<std::string> failures;
};

/// h2* <= h2 <= h2* + dim * h1, injectivity of H2* -> H2 on every solved
/// block, and re-verification of the reported generators.
ConsistencyReport consistency_check(const RestrictedLieAlgebra& R, const CohomologyReport& rep);

}  // namespace rlie
