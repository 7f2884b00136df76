#include "doctest.h"
#include "rlie/classical.hpp"
#include "rlie/errors.hpp"
#include "rlie/groupscheme.hpp"

using namespace rlie;

namespace {

RestrictedLieAlgebra one_dim(std::uint32_t p, Coeff image) {
  return {LieAlgebra(PrimeField(p), {"x"}, {}), {Vec{image}}};
}

RestrictedLieAlgebra two_dim_nonabelian(std::uint32_t p) {
  // [x, y] = y, x^[p] = x, y^[p] = 0
  return {LieAlgebra(PrimeField(p), {"x", "y"}, {{{0, 1}, {{1, 1}}}}), {Vec{1, 0}, Vec{0, 0}}};
}

RestrictedLieAlgebra two_dim_abelian(std::uint32_t p, bool toral) {
  return {LieAlgebra(PrimeField(p), {"x", "y"}, {}), {Vec{toral ? 1u : 0u, 0}, Vec{0, 0}}};
}

void check_round_trip(const RestrictedLieAlgebra& R) {
  const HopfAlgebra U = restricted_enveloping(R);
  CHECK(verify_hopf(U).ok);
  const RestrictedLieAlgebra P = primitives(U);
  CHECK(P.lie == R.lie);
  CHECK(P.pmap == R.pmap);
  CHECK(height(dual_hopf(U)) == 1u);
}

}  // namespace

TEST_CASE("finite groups") {
  CHECK(verify_group(cyclic_group(4)).ok);
  CHECK(verify_group(symmetric_group(3)).ok);
  CHECK(symmetric_group(4).order == 24);
  FiniteGroupData bad = cyclic_group(3);
  bad.table[4] = 0;
  CHECK_FALSE(verify_group(bad).ok);
  CHECK_THROWS_AS(constant_hopf(bad, 5), InputError);
  CHECK(group_isomorphism(direct_product(cyclic_group(2), cyclic_group(3)), cyclic_group(6)));
  CHECK_FALSE(group_isomorphism(symmetric_group(3), cyclic_group(6)));
  CHECK_FALSE(group_isomorphism(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(4)));
}

TEST_CASE("constant group schemes and group algebras") {
  const HopfAlgebra kZ2 = group_algebra(cyclic_group(2), 5);
  const HopfReport g = verify_hopf(kZ2);
  CHECK(g.ok);
  CHECK(g.cocommutative);

  const HopfReport c = verify_hopf(constant_hopf(cyclic_group(2), 5));
  CHECK(c.ok);
  CHECK(c.commutative);

  const HopfAlgebra triv = constant_hopf(cyclic_group(1), 5);
  CHECK(triv.dim == 1);
  CHECK(verify_hopf(triv).ok);

  const HopfAlgebra S3 = constant_hopf(symmetric_group(3), 5);
  const HopfReport s = verify_hopf(S3);
  CHECK(S3.dim == 6);
  CHECK(s.ok);
  CHECK(s.commutative);
  CHECK_FALSE(s.cocommutative);

  for (const FiniteGroupData& G : {cyclic_group(3), symmetric_group(3), cyclic_group(4)}) {
    const HopfAlgebra H = constant_hopf(G, 5);
    const HopfAlgebra D = dual_hopf(H);
    CHECK(D == group_algebra(G, 5));
    CHECK(D.cocommutative());
    const GroupLikes gl = group_likes(D);
    CHECK(gl.elements.size() == G.order);
    CHECK(verify_group(gl.group).ok);
    CHECK(group_isomorphism(gl.group, G));
  }
}

TEST_CASE("corrupted structure is located") {
  HopfAlgebra H = constant_hopf(cyclic_group(3), 5);
  H.comult[1][0].coeff = 2;
  const HopfReport r = verify_hopf(H);
  CHECK_FALSE(r.ok);
  bool located = false;
  for (const auto& f : r.failures) located |= f == "coassociativity fails at " + H.labels[1];
  CHECK(located);

  HopfAlgebra A = group_algebra(cyclic_group(2), 5);
  A.antipode[1] = {};
  CHECK_FALSE(verify_hopf(A).ok);
}

TEST_CASE("restricted enveloping algebras") {
  const HopfAlgebra nil = restricted_enveloping(one_dim(5, 0));
  CHECK(nil.dim == 5);
  CHECK(nil == truncated_polynomial(5, 1));
  CHECK(height(nil) == 1u);

  const HopfAlgebra torus = restricted_enveloping(one_dim(5, 1));
  CHECK(verify_hopf(torus).ok);
  CHECK_FALSE(height(torus).has_value());
  const ConnectedEtale ce = split_connected_etale(torus);
  CHECK(ce.components == 5);
  CHECK(ce.etale.dim == 5);
  CHECK(ce.connected.dim == 1);

  check_round_trip(one_dim(5, 0));
  check_round_trip(one_dim(7, 1));
  check_round_trip(two_dim_nonabelian(5));
  check_round_trip(two_dim_abelian(5, false));
  check_round_trip(two_dim_abelian(5, true));

  const RestrictedLieAlgebra sl3 = construct_classical({ClassicalFamily::sl, 3, 5});
  CHECK_THROWS_AS(restricted_enveloping(sl3), ResourceError);
  EnvelopeOptions tight;
  tight.budget = 100;
  CHECK_THROWS_AS(restricted_enveloping(two_dim_abelian(11, false), tight), ResourceError);
}

TEST_CASE("u(sl2) at p = 5") {
  const RestrictedLieAlgebra sl2 = construct_classical({ClassicalFamily::sl, 2, 5});
  const HopfAlgebra U = restricted_enveloping(sl2);
  CHECK(U.dim == 125);
  const HopfReport r = verify_hopf(U);
  CHECK(r.ok);
  CHECK_FALSE(r.commutative);
  CHECK(r.cocommutative);
  const RestrictedLieAlgebra P = primitives(U);
  CHECK(P.lie == sl2.lie);
  CHECK(P.pmap == sl2.pmap);
  const HopfAlgebra D = dual_hopf(U);
  CHECK(dual_hopf(D) == U);
  CHECK(D.commutative());
  CHECK(height(D) == 1u);
  CHECK_THROWS_AS(height(U), PreconditionError);
  CHECK_THROWS_AS(primitives(D), PreconditionError);
}

TEST_CASE("primitives") {
  CHECK(primitives(group_algebra(cyclic_group(2), 5)).lie.dim() == 0);
  const RestrictedLieAlgebra x = primitives(truncated_polynomial(5, 1));
  CHECK(x.lie.dim() == 1);
  CHECK(x.pmap == std::vector<Vec>{Vec{0}});
}

TEST_CASE("Frobenius kernels and height") {
  const HopfAlgebra H = truncated_polynomial(5, 2);
  CHECK(verify_hopf(H).ok);
  CHECK(height(H) == 2u);
  CHECK(frobenius_kernel(H, 1) == truncated_polynomial(5, 1));
  CHECK(verify_hopf(frobenius_kernel(H, 1)).ok);
  CHECK(frobenius_kernel(H, 2) == H);
  CHECK(frobenius_kernel(H, 5) == H);

  const HopfAlgebra K = frobenius_kernel(constant_hopf(cyclic_group(3), 5), 1);
  CHECK(K.dim == 1);
  CHECK(verify_hopf(K).ok);
  CHECK_FALSE(height(constant_hopf(symmetric_group(3), 5)).has_value());
  CHECK(height(constant_hopf(cyclic_group(1), 5)) == 0u);
  CHECK_THROWS_AS(frobenius_kernel(group_algebra(symmetric_group(3), 5), 1), PreconditionError);
}

TEST_CASE("connected-etale splitting") {
  const HopfAlgebra A = truncated_polynomial(5, 1);
  ConnectedEtale s = split_connected_etale(A);
  CHECK(s.connected == A);
  CHECK(s.etale.dim == 1);

  const HopfAlgebra C = constant_hopf(cyclic_group(3), 5);
  s = split_connected_etale(C);
  CHECK(s.connected.dim == 1);
  CHECK(s.etale.dim == 3);
  CHECK(verify_hopf(s.etale).ok);

  const HopfAlgebra T = tensor_hopf(A, constant_hopf(cyclic_group(2), 5));
  CHECK(verify_hopf(T).ok);
  s = split_connected_etale(T);
  CHECK(s.components == 2);
  CHECK(s.connected.dim == 5);
  CHECK(s.etale.dim == 2);
  CHECK(s.connected.dim * s.etale.dim == T.dim);
  CHECK(verify_hopf(s.connected).ok);
  CHECK(verify_hopf(s.etale).ok);
  CHECK(height(s.connected) == 1u);
  CHECK_FALSE(height(s.etale).has_value());
}
