#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlie/exactalg.hpp"
#include "rlie/liecore.hpp"
#include "rlie/restricted.hpp"

namespace rlie {

/// A finite group by its multiplication table: table[a * order + b] = a b.
struct FiniteGroupData {
  std::size_t order = 0;
  std::vector<std::size_t> table;
  std::size_t identity = 0;

  std::size_t mul(std::size_t a, std::size_t b) const { return table[a * order + b]; }
  std::size_t inverse(std::size_t a) const;
};

/// Exhaustive check of closure, identity, inverses and associativity.
VerificationReport verify_group(const FiniteGroupData& G);
FiniteGroupData cyclic_group(std::size_t n);
/// S_n with permutations in lexicographic order; n <= 6.
FiniteGroupData symmetric_group(std::size_t n);
FiniteGroupData direct_product(const FiniteGroupData& A, const FiniteGroupData& B);
/// Some bijection carrying the table of A onto the table of B, if one exists.
std::optional<std::vector<std::size_t>> group_isomorphism(const FiniteGroupData& A, const FiniteGroupData& B);

/// Finite-dimensional Hopf algebra over F_p with sparse structure tensors.
/// mult[a * dim + b] = e_a e_b; comult[a] is indexed by i * dim + j for
/// e_i (x) e_j; antipode[a] = S(e_a).
struct HopfAlgebra {
  explicit HopfAlgebra(PrimeField F, std::size_t dim = 0);

  PrimeField F;
  std::size_t dim;
  std::vector<std::string> labels;
  std::vector<SparseVec> mult;
  Vec unit;
  std::vector<SparseVec> comult;
  Vec counit;
  std::vector<SparseVec> antipode;

  Vec multiply(const Vec& x, const Vec& y) const;
  Vec power(const Vec& x, std::uint64_t e) const;
  Coeff epsilon(const Vec& x) const { return F.dot(counit, x); }
  bool commutative() const;
  bool cocommutative() const;

  friend bool operator==(const HopfAlgebra& a, const HopfAlgebra& b) {
    return a.F == b.F && a.dim == b.dim && a.mult == b.mult && a.unit == b.unit && a.comult == b.comult &&
           a.counit == b.counit && a.antipode == b.antipode;
  }
};

struct HopfReport : VerificationReport {
  bool commutative = false;
  bool cocommutative = false;
};

/// Associativity, coassociativity, unit, counit, antipode and compatibility
/// laws on all basis tuples. Failures name the offending basis elements.
HopfReport verify_hopf(const HopfAlgebra& H);

/// Functions on G: pointwise product, comult over factorizations.
/// Throws InputError when the table is not a group.
HopfAlgebra constant_hopf(const FiniteGroupData& G, std::uint32_t p);
/// F_p[G] with group-like basis.
HopfAlgebra group_algebra(const FiniteGroupData& G, std::uint32_t p);
/// F_p[x]/(x^{p^h}) with x primitive.
HopfAlgebra truncated_polynomial(std::uint32_t p, unsigned h);
HopfAlgebra tensor_hopf(const HopfAlgebra& A, const HopfAlgebra& B);

struct EnvelopeOptions {
  /// Largest allowed p^{dim R}.
  std::size_t budget = 20000;
  /// Largest allowed number of multiplication table entries (dim^2).
  std::size_t max_table = std::size_t{1} << 24;
};

/// u(R) on the PBW basis x^a = x_0^{a_0} ... x_{n-1}^{a_{n-1}}, a_i < p,
/// indexed by sum a_i p^i. Throws ResourceError beyond the budget.
HopfAlgebra restricted_enveloping(const RestrictedLieAlgebra& R, const EnvelopeOptions& opts = {});

/// Linear dual in the dual basis.
HopfAlgebra dual_hopf(const HopfAlgebra& H);

/// {x : Delta x = x (x) 1 + 1 (x) x}.
SubspaceBasis primitive_elements(const HopfAlgebra& H);
/// Primitives with commutator bracket and p-th power map, in the canonical
/// basis of primitive_elements. Throws PreconditionError unless H is
/// cocommutative.
RestrictedLieAlgebra primitives(const HopfAlgebra& H);

struct GroupLikes {
  std::vector<Vec> elements;
  FiniteGroupData group;
};

/// Group-like elements, found as the F_p-points of the commutative dual.
/// Throws PreconditionError unless H is cocommutative.
GroupLikes group_likes(const HopfAlgebra& H);

/// H / (x^{p^n} : x in ker counit). Throws PreconditionError unless H is
/// commutative.
HopfAlgebra frobenius_kernel(const HopfAlgebra& H, unsigned n);

/// Least n with x^{p^n} = 0 on the augmentation ideal, or nullopt when that
/// ideal is not nilpotent. Throws PreconditionError unless H is commutative.
std::optional<unsigned> height(const HopfAlgebra& H);

struct ConnectedEtale {
  HopfAlgebra connected;
  HopfAlgebra etale;
  /// Number of primitive idempotents of H.
  std::size_t components = 0;
};

/// connected = H e_0 for the primitive idempotent with counit 1; etale =
/// the maximal separable subalgebra, the image of a high Frobenius power.
ConnectedEtale split_connected_etale(const HopfAlgebra& H);

/// Quotient by a Hopf ideal given by a spanning set; the basis is the
/// non-pivot coordinates of its canonical echelon form.
HopfAlgebra hopf_quotient(const HopfAlgebra& H, const std::vector<Vec>& ideal);
/// Restriction to a sub-Hopf algebra, in the canonical basis of the span.
/// Throws Error when the span is not closed.
HopfAlgebra sub_hopf(const HopfAlgebra& H, const std::vector<Vec>& span);

}  // namespace rlie
