#pragma once

// Finite-dimensional Lie algebras over F_p given by structure constants on an
// ordered basis, together with structural queries (axioms, derived series,
// center, ideals, simplicity, Killing form, torus gradings).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlie/exactalg.hpp"

namespace rlie {

using Weight = std::vector<std::int64_t>;

/// Integer weight tuples per basis index. With modulus 0 the weights form a
/// Z^m-grading; otherwise weight arithmetic is done modulo `modulus`.
struct Grading {
  std::vector<Weight> weights;
  std::int64_t modulus = 0;

  std::size_t rank() const { return weights.empty() ? 0 : weights.front().size(); }
  Weight normalize(Weight w) const;
  Weight add(const Weight& a, const Weight& b) const;
  Weight sub(const Weight& a, const Weight& b) const;
  Weight scale(const Weight& a, std::int64_t k) const;
  Weight zero() const { return Weight(rank(), 0); }

  static Grading trivial(std::size_t dim) { return Grading{std::vector<Weight>(dim), 0}; }
  friend bool operator==(const Grading&, const Grading&) = default;
};

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

/// Structure constants [e_i, e_j] for i < j; the rest follows from
/// antisymmetry.
using BracketTable = std::map<std::pair<std::size_t, std::size_t>, SparseVec>;

class LieAlgebra {
 public:
  /// Stores the table as given; zero brackets may be omitted. Entries with
  /// i >= j, repeated labels, or out-of-range indices are rejected.
  /// Jacobi is not checked here; see verify_lie.
  LieAlgebra(PrimeField F, std::vector<std::string> labels, const BracketTable& brackets);

  const PrimeField& field() const { return F_; }
  std::uint32_t p() const { return F_.p(); }
  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// [e_i, e_j] for any i, j.
  const SparseVec& bracket(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  Vec bracket(const Vec& x, const Vec& y) const;
  /// [e_i, y]
  Vec ad(std::size_t i, const Vec& y) const;
  /// [x, y] with x sparse.
  Vec ad(const SparseVec& x, const Vec& y) const;
  /// Matrix of ad x in the basis (columns = images of e_j).
  DenseMatrix ad_matrix(const Vec& x) const;
  /// Upper-triangle structure constants, sorted by (i, j).
  BracketTable brackets() const;

  const std::map<std::string, std::string>& provenance() const { return provenance_; }
  void set_provenance(std::string key, std::string value) { provenance_[std::move(key)] = std::move(value); }
  const std::optional<Grading>& grading() const { return grading_; }
  /// Attaches a grading after checking the grading invariant.
  void set_grading(Grading g);

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.F_ == b.F_ && a.labels_ == b.labels_ && a.table_ == b.table_;
  }

 private:
  PrimeField F_;
  std::vector<std::string> labels_;
  std::vector<SparseVec> table_;  // dense n*n table of sparse brackets
  std::map<std::string, std::string> provenance_;
  std::optional<Grading> grading_;
};

/// Antisymmetry and Jacobi on all basis triples.
VerificationReport verify_lie(const LieAlgebra& L, std::size_t max_failures = 16);

/// L, [L,L], [[L,L],[L,L]], ... until the chain stabilizes (last entry
/// repeats the fixed point only once).
std::vector<SubspaceBasis> derived_series(const LieAlgebra& L);
SubspaceBasis derived_algebra(const LieAlgebra& L, const SubspaceBasis& S);
SubspaceBasis center(const LieAlgebra& L);
/// Centralizer of S in the subspace T.
SubspaceBasis centralizer(const LieAlgebra& L, const SubspaceBasis& S, const SubspaceBasis& T);
/// Smallest ideal containing seed. Throws InputError for a zero seed.
SubspaceBasis ideal_spin(const LieAlgebra& L, const Vec& seed);
/// Smallest ideal containing all seeds (zero seeds allowed).
SubspaceBasis ideal_generated(const LieAlgebra& L, const std::vector<Vec>& seeds);
/// Subalgebra generated by the given vectors.
SubspaceBasis generated_subalgebra(const LieAlgebra& L, const std::vector<Vec>& gens);
bool is_subalgebra(const LieAlgebra& L, const SubspaceBasis& S);
bool is_ideal(const LieAlgebra& L, const SubspaceBasis& S);

/// Structure constants of a subalgebra in its canonical RREF basis.
/// Labels are taken from the pivot basis vectors.
LieAlgebra subalgebra(const LieAlgebra& L, const SubspaceBasis& S);
/// Quotient by an ideal; the quotient basis consists of the images of the
/// basis vectors at non-pivot positions of the ideal.
LieAlgebra quotient(const LieAlgebra& L, const SubspaceBasis& I);
/// Coordinates of v in L/I (see quotient).
Vec quotient_coordinates(const PrimeField& F, const SubspaceBasis& I, const Vec& v);

enum class Simplicity { simple, not_simple, inconclusive };

struct SimplicityResult {
  Simplicity verdict = Simplicity::inconclusive;
  std::string reason;
  bool is_simple() const { return verdict == Simplicity::simple; }
};

struct SimplicityOptions {
  std::uint64_t seed = 0x5eed;
  int attempts = 40;
  /// Largest number of lines in a kernel that the certificate enumerates.
  std::uint64_t max_lines = 4096;
};

/// Simplicity via deterministic ideal spinning from basis seeds (sound for
/// "not simple") followed by Norton's irreducibility criterion for the
/// adjoint module: for a singular element theta of the associative envelope
/// of ad(L), the module is irreducible iff every nonzero vector in ker theta
/// spins to L and some nonzero vector of ker theta^T spins to L^* under the
/// transposed action.
SimplicityResult is_simple(const LieAlgebra& L, const SimplicityOptions& opts = {});

struct KillingResult {
  DenseMatrix matrix;
  SubspaceBasis radical;
};
KillingResult killing_radical(const LieAlgebra& L);

struct TorusGrading {
  /// Same basis as the input when every basis vector is a common eigenvector;
  /// otherwise rebased to a common eigenbasis.
  LieAlgebra algebra;
  Grading grading;
  bool rebased = false;
};

/// Simultaneous eigenspace decomposition for ad of the given toral vectors.
/// Eigenvalues are lifted to [0, p) and the grading has modulus p. Throws
/// PreconditionError naming the offending element when its ad action is not
/// diagonalizable over F_p or the actions do not commute.
TorusGrading torus_grading(const LieAlgebra& L, const std::vector<Vec>& toral);

/// Returns the first violation of [L_a, L_b] in L_{a+b}, if any.
std::optional<std::string> grading_violation(const LieAlgebra& L, const Grading& g);

/// Small generating set of basis indices (greedy); generated subalgebra = L.
std::vector<std::size_t> generating_set(const LieAlgebra& L);

}  // namespace rlie
