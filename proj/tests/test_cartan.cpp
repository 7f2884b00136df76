#include <random>

#include "doctest.h"
#include "rlie/cartan.hpp"

using namespace rlie;

namespace {

Coeff naive_binomial(std::uint64_t a, std::uint64_t b, std::uint32_t p) {
  __int128 c = 1;
  for (std::uint64_t k = 1; k <= b; ++k) c = c * static_cast<__int128>(a - b + k) / k;
  return static_cast<Coeff>(c % p);
}

DPElement mono(const DividedPowers& O, std::vector<std::uint64_t> a, Coeff c = 1) { return dp_monomial(O, a, c); }

DifferentialForm form1(const DividedPowers& O, std::vector<std::uint32_t> idx, DPElement f) {
  DifferentialForm w;
  w.degree = idx.size();
  w.terms[idx] = std::move(f);
  return w;
}

SpecialDerivation field_of(const DividedPowers& O, std::size_t i, DPElement f) {
  SpecialDerivation D{std::vector<DPElement>(O.m())};
  D.coeffs[i] = std::move(f);
  return D;
}

// D as a dense operator on O(m;n)
DenseMatrix operator_matrix(const DividedPowers& O, const SpecialDerivation& D) {
  DenseMatrix M(O.size(), O.size());
  for (std::size_t c = 0; c < O.size(); ++c)
    for (const auto& t : apply(O, D, {Term{static_cast<std::uint32_t>(c), 1}})) M(t.index, c) = t.coeff;
  return M;
}

bool multiple_of(const DividedPowers& O, const DifferentialForm& a, const DifferentialForm& w) {
  // a = g w; w has a term with unit constant coefficient at the top index
  const auto& top = *w.terms.rbegin();
  REQUIRE(top.second == DPElement{Term{0, 1}});
  auto it = a.terms.find(top.first);
  const DPElement g = it == a.terms.end() ? DPElement{} : it->second;
  return form_multiply(O, g, w) == a;
}

}  // namespace

TEST_CASE("divided power multiplication") {
  const DividedPowers O1(5, {2});
  CHECK(dp_multiply(O1, mono(O1, {1}), mono(O1, {1})) == mono(O1, {2}, 2));
  CHECK(dp_multiply(O1, mono(O1, {2}), mono(O1, {3})).empty());
  const DividedPowers O2(5, {1, 1});
  CHECK(dp_multiply(O2, mono(O2, {4, 0}), mono(O2, {1, 0})).empty());
  CHECK_THROWS_AS(mono(O2, {5, 0}), InputError);

  // against binomials computed without Lucas' theorem
  const DividedPowers O(5, {2, 1});
  for (std::size_t a = 0; a < O.size(); ++a)
    for (std::size_t b = 0; b < O.size(); ++b) {
      const auto& ea = O.exponent(a);
      const auto& eb = O.exponent(b);
      Coeff c = 1;
      bool in = true;
      for (std::size_t i = 0; i < 2; ++i) {
        if (ea[i] + eb[i] >= O.bound(i)) in = false;
        else c = O.field().mul(c, naive_binomial(ea[i] + eb[i], ea[i], 5));
      }
      const DPElement got = dp_multiply(O, {Term{static_cast<std::uint32_t>(a), 1}}, {Term{static_cast<std::uint32_t>(b), 1}});
      if (!in || c == 0) {
        CHECK(got.empty());
      } else {
        std::vector<std::uint64_t> e{ea[0] + eb[0], ea[1] + eb[1]};
        CHECK(got == mono(O, e, c));
      }
    }
}

TEST_CASE("divided power multiplication is commutative and associative") {
  const DividedPowers O(5, {1});
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      const DPElement x{Term{static_cast<std::uint32_t>(a), 1}}, y{Term{static_cast<std::uint32_t>(b), 1}};
      CHECK(dp_multiply(O, x, y) == dp_multiply(O, y, x));
      for (std::size_t c = 0; c < 5; ++c) {
        const DPElement z{Term{static_cast<std::uint32_t>(c), 1}};
        CHECK(dp_multiply(O, dp_multiply(O, x, y), z) == dp_multiply(O, x, dp_multiply(O, y, z)));
      }
    }
  const DividedPowers P(7, {1, 2});
  std::mt19937 rng(11);
  auto rnd = [&] {
    std::vector<Term> t;
    for (int k = 0; k < 4; ++k) t.push_back({static_cast<std::uint32_t>(rng() % P.size()), static_cast<Coeff>(1 + rng() % 6)});
    return P.field().normalize(t);
  };
  for (int k = 0; k < 30; ++k) {
    const auto x = rnd(), y = rnd(), z = rnd();
    CHECK(dp_multiply(P, x, y) == dp_multiply(P, y, x));
    CHECK(dp_multiply(P, dp_multiply(P, x, y), z) == dp_multiply(P, x, dp_multiply(P, y, z)));
  }
}

TEST_CASE("special derivations") {
  const DividedPowers O(5, {1, 1});
  const auto d1 = partial_derivation(O, 0);
  CHECK(apply(O, d1, mono(O, {3, 2})) == mono(O, {2, 2}));
  // x^(a) d_i acting on x^(b) follows the special-derivation rule
  const auto D = field_of(O, 1, mono(O, {1, 1}));
  CHECK(apply(O, D, mono(O, {0, 2})) == dp_multiply(O, mono(O, {0, 1}), mono(O, {1, 1})));
  CHECK(divergence(O, D) == mono(O, {1, 0}));
  // the bracket is the commutator of operators
  std::mt19937 rng(2);
  for (int k = 0; k < 10; ++k) {
    SpecialDerivation A{std::vector<DPElement>(2)}, B{std::vector<DPElement>(2)};
    for (auto* X : {&A, &B})
      for (auto& c : X->coeffs) c = O.field().normalize({{static_cast<std::uint32_t>(rng() % 25), static_cast<Coeff>(1 + rng() % 4)},
                                                          {static_cast<std::uint32_t>(rng() % 25), static_cast<Coeff>(1 + rng() % 4)}});
    const DenseMatrix MA = operator_matrix(O, A), MB = operator_matrix(O, B);
    CHECK(operator_matrix(O, bracket(O, A, B)) == MA.multiply(O.field(), MB).sub(O.field(), MB.multiply(O.field(), MA)));
    CHECK(operator_matrix(O, composition_power(O, A)) == MA.power(O.field(), 5));
  }
}

TEST_CASE("Lie derivative") {
  const DividedPowers O(5, {1, 1});
  const DifferentialForm vol = special_form(O);
  CHECK(lie_derivative(O, partial_derivation(O, 0), vol).is_zero());
  CHECK(lie_derivative(O, field_of(O, 0, mono(O, {1, 0})), vol) == vol);
  const DifferentialForm wH = hamiltonian_form(O);
  CHECK(lie_derivative(O, field_of(O, 0, mono(O, {0, 1})), wH).is_zero());
  CHECK_FALSE(lie_derivative(O, field_of(O, 0, mono(O, {1, 0})), wH).is_zero());
  // L_D (f dx) = D(f) dx + f d(D x)
  const auto D = field_of(O, 1, mono(O, {2, 0}));
  const DifferentialForm w = form1(O, {1}, mono(O, {0, 1}));
  DifferentialForm expect = form1(O, {1}, mono(O, {2, 0}));
  expect.terms[{0}] = mono(O, {1, 1});
  CHECK(lie_derivative(O, D, w) == expect);
  // dx_1 ^ dx_2 reorders with a sign
  const DifferentialForm two = form1(O, {0, 1}, mono(O, {0, 0}));
  const auto swap = field_of(O, 0, mono(O, {0, 1}));
  CHECK(lie_derivative(O, swap, two).is_zero());
  CHECK(exterior_derivative(O, mono(O, {1, 1})).terms.size() == 2);
}

TEST_CASE("Witt algebras") {
  const auto W11 = witt(1, {1}, 5);
  CHECK(W11.lie.dim() == 5);
  const auto& L = W11.lie.labels();
  const auto find = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(L.begin(), L.end(), s) - L.begin());
  };
  CHECK(W11.lie.bracket(find("x(0)d1"), find("x(1)d1")) == SparseVec{Term{static_cast<std::uint32_t>(find("x(0)d1")), 1}});
  CHECK(W11.restricted());
  CHECK(witt(2, {1, 1}, 5).lie.dim() == 50);
  const auto W12 = witt(1, {2}, 5);
  CHECK(W12.lie.dim() == 25);
  CHECK_FALSE(W12.restricted());
  CHECK_FALSE(induced_pmap(W12.lie).has_value());
  CHECK(verify_lie(W12.lie).ok);
  CHECK(is_simple(W11.lie).is_simple());
  CHECK(is_simple(witt(2, {1, 1}, 5).lie).is_simple());
  CHECK(is_simple(witt(1, {1}, 7).lie).is_simple());
  CHECK(killing_radical(W11.lie).radical.dim() > 0);
  CHECK(killing_radical(W12.lie).radical.dim() > 0);
  // the restricted structure agrees with the one induced by ad
  const auto induced = induced_pmap(W11.lie);
  REQUIRE(induced.has_value());
  CHECK(*induced == W11.pmap);
  CHECK_THROWS_AS(witt(2, {1}, 5), InputError);
}

TEST_CASE("Hamiltonian algebra H(2;1)^(2)") {
  const auto H = hamiltonian(2, {1, 1}, 5);
  CHECK(H.lie.dim() == 23);
  CHECK(H.restricted());
  CHECK(is_simple(H.lie).is_simple());
  CHECK(killing_radical(H.lie).radical.dim() > 0);
  REQUIRE(H.lie.grading().has_value());
  CHECK_FALSE(grading_violation(H.lie, *H.lie.grading()).has_value());
  const DifferentialForm w = hamiltonian_form(H.O);
  for (const auto& v : H.embedding.vectors()) CHECK(lie_derivative(H.O, from_witt_coordinates(H.O, v), w).is_zero());
  CHECK_THROWS_AS(hamiltonian(3, {}, 5), InputError);
  CHECK_THROWS_AS(hamiltonian(2, {}, 3), InputError);
  CHECK(hamiltonian(2, {1, 1}, 7).lie.dim() == 47);
}

TEST_CASE("contact algebra K(3;1)") {
  const auto K = contact(3, {}, 5);
  CHECK(K.lie.dim() == 125);
  CHECK(K.restricted());
  const DifferentialForm w = contact_form(K.O);
  for (const auto& v : K.embedding.vectors())
    CHECK(multiple_of(K.O, lie_derivative(K.O, from_witt_coordinates(K.O, v), w), w));
  REQUIRE(K.lie.grading().has_value());
  CHECK_FALSE(grading_violation(K.lie, *K.lie.grading()).has_value());
  CHECK(is_simple(K.lie).is_simple());
  CHECK(killing_radical(K.lie).radical.dim() > 0);
  CHECK_THROWS_AS(contact(4, {}, 5), InputError);
}

TEST_CASE("special algebra S(3;1)^(1)") {
  const auto S = special(3, {}, 5);
  CHECK(S.lie.dim() == 248);
  CHECK(S.restricted());
  const DifferentialForm w = special_form(S.O);
  for (const auto& v : S.embedding.vectors()) CHECK(lie_derivative(S.O, from_witt_coordinates(S.O, v), w).is_zero());
  REQUIRE(S.lie.grading().has_value());
  CHECK(is_simple(S.lie).is_simple());
  CHECK(killing_radical(S.lie).radical.dim() > 0);
  CHECK_THROWS_AS(special(2, {}, 5), InputError);
}

TEST_CASE("Melikian algebra M(1,1)") {
  CHECK_THROWS_AS(melikian(1, 1, 7), InputError);
  const auto M = melikian(1, 1, 5);
  CHECK(M.lie.dim() == 125);
  CHECK(M.restricted());
  const auto& L = M.lie.labels();
  const auto find = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(L.begin(), L.end(), s) - L.begin());
  };
  // [d1, (x1 d1)~] = (d1)~ since div(d1) = 0
  CHECK(M.lie.bracket(find("x(0,0)d1"), find("x(1,0)d1~")) ==
        SparseVec{Term{static_cast<std::uint32_t>(find("x(0,0)d1~")), 1}});
  // [x1 d1, 1] = -2 div(x1 d1) = -2
  CHECK(M.lie.bracket(find("x(1,0)d1"), find("x(0,0)")) == SparseVec{Term{static_cast<std::uint32_t>(find("x(0,0)")), 3}});
  REQUIRE(M.lie.grading().has_value());
  CHECK(M.lie.grading()->modulus == 5);
  CHECK(is_simple(M.lie).is_simple());
  CHECK(killing_radical(M.lie).radical.dim() > 0);
}

TEST_CASE("p-envelopes of Cartan-type algebras") {
  const auto e11 = cartan_p_envelope(witt(1, {1}, 5));
  CHECK(e11.envelope.algebra.lie.dim() == 5);
  CHECK(e11.adjoined.empty());
  CHECK(e11.agrees);

  const auto e12 = cartan_p_envelope(witt(1, {2}, 5));
  CHECK(e12.envelope.algebra.lie.dim() == 26);
  CHECK(e12.adjoined == std::vector<std::string>{"d1^5"});
  CHECK(e12.minimal_dim == 26);
  CHECK(e12.agrees);
  CHECK(verify_lie(e12.envelope.algebra.lie).ok);
  CHECK(verify_restricted(e12.envelope.algebra.lie, e12.envelope.algebra.pmap).ok);

  const auto e13 = cartan_p_envelope(witt(1, {3}, 5));
  CHECK(e13.envelope.algebra.lie.dim() == 127);
  CHECK(e13.minimal_dim == 127);
  CHECK(e13.agrees);
  CHECK(verify_restricted(e13.envelope.algebra.lie, e13.envelope.algebra.pmap).ok);
}
