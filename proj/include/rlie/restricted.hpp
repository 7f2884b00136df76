#pragma once

// p-maps on Lie algebras over F_p: the Jacobson sum, extension of basis
// images to arbitrary vectors, the restricted axioms, p-closures, derivation
// algebras, minimal p-envelopes and the correspondence between simple and
// restricted-simple algebras.

#include <functional>
#include <string>
#include <vector>

#include "rlie/liecore.hpp"

namespace rlie {

/// A Lie algebra with p-map images x_i^[p] of the basis vectors.
struct RestrictedLieAlgebra {
  LieAlgebra lie;
  std::vector<Vec> pmap;
};

/// Sum over i of s_i(x, y), so that (x+y)^[p] = x^[p] + y^[p] + result.
Vec jacobson_terms(const LieAlgebra& L, const Vec& x, const Vec& y);

/// x^[p] from the basis images: semilinearity on each basis term, then the
/// Jacobson sum folded left to right over the terms in basis order.
Vec eval_pmap(const RestrictedLieAlgebra& R, const Vec& x);

/// Same as eval_pmap but folding the terms in the given order (a permutation
/// of the basis indices); used to test fold-order independence.
Vec eval_pmap_ordered(const RestrictedLieAlgebra& R, const Vec& x, const std::vector<std::size_t>& order);

/// Checks ad(x_i^[p]) = (ad x_i)^p on every basis vector and spot-checks the
/// extended map on random vectors (operator identity and semilinearity).
VerificationReport verify_restricted(const LieAlgebra& L, const std::vector<Vec>& images, int samples = 6,
                                     std::uint64_t seed = 0x11ab);

/// Verifies and pairs; throws PreconditionError listing the first failure.
RestrictedLieAlgebra make_restricted(LieAlgebra L, std::vector<Vec> images);

/// (ad x)^k y
Vec ad_power(const LieAlgebra& L, const Vec& x, const Vec& y, std::uint64_t k);

/// Smallest subspace containing S that is closed under the bracket and the
/// p-map.
SubspaceBasis p_closure(const RestrictedLieAlgebra& R, const SubspaceBasis& S);

/// Smallest p-ideal (ideal closed under the p-map) containing seed.
SubspaceBasis p_ideal_spin(const RestrictedLieAlgebra& R, const Vec& seed);

/// For a centerless algebra: the unique images y_i with ad y_i = (ad e_i)^p,
/// or nullopt when some (ad e_i)^p is not inner. Throws PreconditionError
/// when the center is nonzero.
std::optional<std::vector<Vec>> induced_pmap(const LieAlgebra& L);

/// A Lie subalgebra of gl(n) spanned by matrices, in the canonical basis of
/// its row-major vectorization.
struct MatrixLieAlgebra {
  std::size_t n = 0;
  SubspaceBasis space;
  std::vector<SparseMatrix> matrices;  // basis matrices, in basis order
  LieAlgebra lie;
  /// Coordinates of the p-th matrix powers; empty unless closed.
  std::vector<Vec> pmap;
};

struct MatrixClosureOptions {
  /// Add p-th powers until closed (restricted subalgebra generated).
  bool p_closed = false;
  /// The span of the generators is already closed under commutators.
  bool assume_subalgebra = false;
  /// Label of the basis vector whose pivot sits at matrix entry (r, c).
  std::function<std::string(std::size_t r, std::size_t c)> label;
};

/// Lie (or restricted, with p_closed) subalgebra of gl(n) generated by gens.
MatrixLieAlgebra matrix_lie_algebra(const PrimeField& F, std::size_t n, const std::vector<SparseMatrix>& gens,
                                    const MatrixClosureOptions& opts = {});

/// Row-major vectorization of a square matrix.
Vec vectorize(const SparseMatrix& M);
SparseMatrix commutator(const PrimeField& F, const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix matrix_power(const PrimeField& F, const SparseMatrix& A, std::uint64_t e);
SparseMatrix sparse_ad_matrix(const LieAlgebra& L, std::size_t i);

struct DerivationAlgebra {
  RestrictedLieAlgebra der;
  /// Der basis as operators on L (columns are images of basis vectors).
  std::vector<SparseMatrix> operators;
  /// Coordinates of ad e_i in the Der basis, one per basis vector of L.
  std::vector<Vec> ad;
};

/// Derivations of L with the composition p-th power as p-map. When L
/// carries a grading the linear system is solved one weight block at a time.
DerivationAlgebra derivation_algebra(const LieAlgebra& L);

struct Envelope {
  RestrictedLieAlgebra algebra;
  /// Coordinates of ad e_i in the envelope basis.
  std::vector<Vec> ad;
};

/// p-closure of ad(M) in Der(M), computed inside gl(M). Throws
/// PreconditionError when M has a nonzero center.
Envelope minimal_p_envelope(const LieAlgebra& M);

/// Restricted simplicity. Negative verdicts come from p-ideal spinning of
/// basis seeds; a positive verdict requires [R,R] simple, its centralizer
/// zero and its p-closure equal to R.
SimplicityResult is_restricted_simple(const RestrictedLieAlgebra& R, const SimplicityOptions& opts = {});

struct BijectionReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::size_t input_dim = 0;
  std::size_t envelope_dim = 0;  // plain input: dim of the envelope
  std::size_t derived_dim = 0;   // dim of the derived algebra of the restricted side
  std::size_t closure_dim = 0;   // dim of the p-closure of that derived algebra
  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

/// Simple M: the envelope is restricted-simple and its derived algebra is
/// ad(M).
BijectionReport simple_to_restricted(const LieAlgebra& M, const SimplicityOptions& opts = {});
/// Restricted-simple L: [L,L] is simple and its p-closure is L.
BijectionReport restricted_to_simple(const RestrictedLieAlgebra& L, const SimplicityOptions& opts = {});

}  // namespace rlie
