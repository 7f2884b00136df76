#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "rlie/cartan.hpp"
#include "rlie/classical.hpp"
#include "rlie/cohomology.hpp"

using namespace rlie;

namespace {

RestrictedLieAlgebra classical(const std::string& fam, std::size_t N, std::uint32_t p) {
  return construct_classical({parse_classical_family(fam), N, p});
}

LieAlgebra abelian(std::size_t n, std::uint32_t p) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  return LieAlgebra(PrimeField(p), labels, {});
}

// 2-cochains as dense antisymmetric tables f[a*n+b]
using Table = std::vector<Vec>;

Vec eval2(const PrimeField& F, std::size_t n, const Table& f, const Vec& x, const Vec& y) {
  Vec r(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (x[a] && y[b]) F.axpy(r, F.mul(x[a], y[b]), f[a * n + b]);
  return r;
}

// d1 and d2 straight from their defining formulas
Table d1_naive(const LieAlgebra& L, const std::vector<Vec>& g) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  Table out(n * n, Vec(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Vec x = F.unit(n, a), y = F.unit(n, b);
      Vec gxy = g[0];
      std::fill(gxy.begin(), gxy.end(), 0);
      const Vec br = L.bracket(x, y);
      for (std::size_t k = 0; k < n; ++k)
        if (br[k]) F.axpy(gxy, br[k], g[k]);
      out[a * n + b] = F.sub(F.sub(L.bracket(x, g[b]), L.bracket(y, g[a])), gxy);
    }
  return out;
}

std::vector<Vec> d2_naive(const LieAlgebra& L, const Table& f, std::size_t x, std::size_t y, std::size_t z) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  const Vec ex = F.unit(n, x), ey = F.unit(n, y), ez = F.unit(n, z);
  Vec r(n, 0);
  r = F.add(r, L.bracket(ex, eval2(F, n, f, ey, ez)));
  r = F.sub(r, L.bracket(ey, eval2(F, n, f, ex, ez)));
  r = F.add(r, L.bracket(ez, eval2(F, n, f, ex, ey)));
  r = F.sub(r, eval2(F, n, f, L.bracket(ex, ey), ez));
  r = F.add(r, eval2(F, n, f, L.bracket(ex, ez), ey));
  r = F.sub(r, eval2(F, n, f, L.bracket(ey, ez), ex));
  return {r};
}

Vec apply(const PrimeField& F, const SparseMatrix& M, const Vec& v) {
  Vec out(M.rows(), 0);
  for (std::size_t r = 0; r < M.rows(); ++r) {
    std::uint64_t s = 0;
    for (const Term& t : M.row(r)) s = (s + static_cast<std::uint64_t>(t.coeff) * v[t.index]) % F.p();
    out[r] = static_cast<Coeff>(s);
  }
  return out;
}

// Relabels the basis by a permutation: new index perm[i] for old index i.
RestrictedLieAlgebra permuted(const RestrictedLieAlgebra& R, const std::vector<std::size_t>& perm) {
  const LieAlgebra& L = R.lie;
  const std::size_t n = L.dim();
  const PrimeField& F = L.field();
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[perm[i]] = L.labels()[i];
  BracketTable T;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<Term> terms;
      for (const Term& t : L.bracket(i, j)) terms.push_back({static_cast<std::uint32_t>(perm[t.index]), t.coeff});
      std::size_t a = perm[i], b = perm[j];
      if (a > b) {
        std::swap(a, b);
        for (auto& t : terms) t.coeff = F.neg(t.coeff);
      }
      if (!terms.empty()) T[{a, b}] = F.normalize(std::move(terms));
    }
  std::vector<Vec> pm(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) pm[perm[i]][perm[k]] = R.pmap[i][k];
  return RestrictedLieAlgebra{LieAlgebra(F, labels, T), pm};
}

CohomologyOptions full_opts() {
  CohomologyOptions o;
  o.method = CohomologyMethod::full;
  return o;
}

}  // namespace

TEST_CASE("cochain indexing") {
  CHECK(cochain_dim(5, 0) == 5);
  CHECK(cochain_dim(5, 2) == 50);
  CHECK(cochain_dim(5, 3) == 50);
  std::size_t expect = 0;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b)
      for (std::size_t c = b + 1; c < 6; ++c) {
        CHECK(cochain_index(6, {a, b, c}, 2) == expect * 6 + 2);
        ++expect;
      }
  CHECK_THROWS_AS(cochain_index(6, {3, 1}, 0), InputError);
  CHECK_THROWS_AS(ce_differential(abelian(2, 5), 3), InputError);
}

TEST_CASE("differentials match the defining formulas") {
  const CartanAlgebra W = witt(1, {}, 5);
  const LieAlgebra& L = W.lie;
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  std::mt19937 rng(7);
  std::vector<Vec> g(n, Vec(n));
  Vec gflat(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) gflat[a * n + b] = g[a][b] = static_cast<Coeff>(rng() % 5);
  const Vec d1g = apply(F, ce_differential(L, 1), gflat);
  const Table naive = d1_naive(L, g);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k) CHECK(d1g[cochain_index(n, {a, b}, k)] == naive[a * n + b][k]);

  Table f(n * n, Vec(n, 0));
  Vec fflat(cochain_dim(n, 2));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t k = 0; k < n; ++k) {
        const Coeff c = static_cast<Coeff>(rng() % 5);
        fflat[cochain_index(n, {a, b}, k)] = c;
        f[a * n + b][k] = c;
        f[b * n + a][k] = F.neg(c);
      }
  const Vec d2f = apply(F, ce_differential(L, 2), fflat);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        const Vec r = d2_naive(L, f, x, y, z)[0];
        for (std::size_t k = 0; k < n; ++k) CHECK(d2f[cochain_index(n, {x, y, z}, k)] == r[k]);
      }
}

TEST_CASE("d composed with d vanishes") {
  const std::vector<LieAlgebra> algs = {witt(1, {}, 5).lie, classical("sl", 3, 5).lie, witt(1, {}, 7).lie};
  for (const LieAlgebra& L : algs) {
    const PrimeField& F = L.field();
    const SparseMatrix D0 = ce_differential(L, 0), D1 = ce_differential(L, 1), D2 = ce_differential(L, 2);
    CHECK(D1.multiply(F, D0).is_zero());
    CHECK(D2.multiply(F, D1).is_zero());
  }
  // inner derivations are cocycles; central elements have zero coboundary
  const LieAlgebra A = abelian(3, 5);
  CHECK(ce_differential(A, 0).is_zero());
}

TEST_CASE("ordinary cohomology in degrees 1 and 2") {
  CHECK(cohomology_dim(abelian(1, 5), 1) == 1);
  CHECK(cohomology_dim(abelian(2, 5), 1) == 4);
  CHECK(cohomology_dim(abelian(2, 5), 2) == 2);
  const auto sl2 = classical("sl", 2, 5);
  CHECK(cohomology_dim(sl2.lie, 1) == 0);
  CHECK(cohomology_dim(sl2.lie, 2) == 0);
  const CartanAlgebra W = witt(1, {}, 5);
  CHECK(cohomology_dim(W.lie, 1) == 0);
  CHECK(cohomology_dim(W.lie, 1, W.lie.grading()) == 0);
  // h1 = dim Der - dim ad L for a centerless algebra
  CHECK(derivation_algebra(W.lie).der.lie.dim() - W.lie.dim() == 0);
  CHECK(cohomology_dim(W.lie, 2) == cohomology_dim(W.lie, 2, W.lie.grading()));
  CHECK_THROWS_AS(cohomology_dim(abelian(1, 3), 1), InputError);

  // the solver agrees with the full matrices, including for nonzero centers
  for (const LieAlgebra& L : {abelian(2, 5), sl2.lie, W.lie}) {
    const CohomologyReport r = lie_cohomology(L);
    CHECK(r.h1 == cohomology_dim(L, 1));
    CHECK(r.h2 == cohomology_dim(L, 2));
    const CohomologyReport f = lie_cohomology(L, full_opts());
    CHECK(f.h1 == r.h1);
    CHECK(f.h2 == r.h2);
  }
}

TEST_CASE("weight blocks") {
  const CartanAlgebra W = witt(1, {}, 5);
  const LieAlgebra& L = W.lie;
  const PrimeField& F = L.field();
  std::size_t dom = 0, rk = 0;
  for (const auto& b : weight_blocks(L, *L.grading(), 1)) {
    dom += b.domain.size();
    rk += rank(F, b.matrix);
  }
  CHECK(dom == cochain_dim(5, 1));
  CHECK(rk == rank(F, ce_differential(L, 1)));
  const auto one = weight_blocks(L, Grading::trivial(5), 2);
  REQUIRE(one.size() == 1);
  CHECK(one[0].domain.size() == cochain_dim(5, 2));
  CHECK(rank(F, one[0].matrix) == rank(F, ce_differential(L, 2)));
  Grading bad = *L.grading();
  std::swap(bad.weights[0], bad.weights[4]);
  CHECK_THROWS_AS(weight_blocks(L, bad, 1), PreconditionError);
}

TEST_CASE("restricted cohomology of W(1;1)") {
  for (std::uint32_t p : {5u, 7u}) {
    const RestrictedLieAlgebra R = witt(1, {}, p).as_restricted();
    const CohomologyReport r = restricted_h2(R);
    CHECK(r.h1 == 0);
    CHECK(r.h2_restricted == 1);
    CHECK(r.h2 == 1);
    REQUIRE(r.generators.size() == 1);
    CHECK(verify_deformation(R, r.generators[0]).ok);
    const ConsistencyReport c = consistency_check(R, r);
    CHECK(c.ok);

    const CohomologyReport f = restricted_h2(R, full_opts());
    CHECK(f.h2_restricted == 1);
    CHECK(f.h2 == 1);
    CohomologyOptions ungraded;
    ungraded.use_grading = false;
    CHECK(restricted_h2(R, ungraded).h2_restricted == 1);
    ungraded.method = CohomologyMethod::full;
    CHECK(restricted_h2(R, ungraded).h2_restricted == 1);
  }
}

TEST_CASE("classical algebras are rigid") {
  for (std::uint32_t p : {5u, 7u}) {
    const auto sl2 = classical("sl", 2, p);
    const CohomologyReport r = restricted_h2(sl2);
    CHECK(r.h1 == 0);
    CHECK(r.h2 == 0);
    CHECK(r.h2_restricted == 0);
    CHECK(restricted_h2(sl2, full_opts()).h2_restricted == 0);
  }
  const auto sl3 = classical("sl", 3, 5);
  const CohomologyReport r = restricted_h2(sl3);
  CHECK(r.h2_restricted == 0);
  CHECK(r.h2 == 0);
  CHECK(consistency_check(sl3, r).ok);
  CHECK(restricted_h2(sl3, full_opts()).h2_restricted == 0);
}

TEST_CASE("restricted cohomology rejects bad inputs") {
  const LieAlgebra A = abelian(2, 5);
  CHECK_THROWS_AS(restricted_h2(RestrictedLieAlgebra{A, {Vec(2, 0), Vec(2, 0)}}), PreconditionError);
  const LieAlgebra A3 = abelian(1, 3);
  CHECK_THROWS_AS(restricted_h2(RestrictedLieAlgebra{A3, {Vec(1, 0)}}), InputError);
}

TEST_CASE("restricted cohomology does not depend on the basis order") {
  const RestrictedLieAlgebra R = witt(1, {}, 5).as_restricted();
  std::vector<std::size_t> perm(R.lie.dim());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(3);
  CohomologyOptions o;
  o.use_grading = false;
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const RestrictedLieAlgebra Q = permuted(R, perm);
    const CohomologyReport r = restricted_h2(Q, o);
    CHECK(r.h2_restricted == 1);
    for (const auto& g : r.generators) CHECK(verify_deformation(Q, g).ok);
  }
}

TEST_CASE("inner transports are trivial") {
  // transport of (0, 0) along phi = ad m is (0, 0)
  const RestrictedLieAlgebra R = witt(1, {}, 5).as_restricted();
  const LieAlgebra& L = R.lie;
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<Vec> g(n);
    for (std::size_t b = 0; b < n; ++b) g[b] = L.ad(b, F.unit(n, m));
    for (auto& v : g) F.scale(v, F.neg(1));
    // d1(ad m) = 0
    const Table d = d1_naive(L, g);
    for (const auto& v : d) CHECK(is_zero(v));
    // the omega part (ad x)^{p-1}(phi x) - phi(x^[p]) vanishes too
    for (std::size_t i = 0; i < n; ++i) {
      Vec e = g[i];
      for (std::uint32_t k = 0; k + 1 < L.p(); ++k) e = L.ad(i, e);
      Vec phix(n, 0);
      for (std::size_t k = 0; k < n; ++k)
        if (R.pmap[i][k]) F.axpy(phix, R.pmap[i][k], g[k]);
      CHECK(F.sub(e, phix) == Vec(n, 0));
    }
  }
}

TEST_CASE("restricted cohomology of W(2;1) and H(2;1)") {
  const RestrictedLieAlgebra W2 = witt(2, {}, 5).as_restricted();
  const CohomologyReport w = restricted_h2(W2);
  CHECK(w.h2_restricted == 2);
  CHECK(consistency_check(W2, w).ok);
  for (const auto& g : w.generators) CHECK(verify_deformation(W2, g).ok);

  const RestrictedLieAlgebra H = hamiltonian(2, {}, 5).as_restricted();
  const CohomologyReport h = restricted_h2(H);
  CHECK(h.h2_restricted == 3);
  CHECK(consistency_check(H, h).ok);
  CohomologyOptions noskip;
  noskip.skip_inner_torus = false;
  CHECK(restricted_h2(H, noskip).h2_restricted == 3);
  CHECK(restricted_h2(H, full_opts()).h2_restricted == 3);
}

TEST_CASE("perturbed deformations are rejected") {
  const RestrictedLieAlgebra R = witt(1, {}, 5).as_restricted();
  const CohomologyReport r = restricted_h2(R);
  REQUIRE(r.generators.size() == 1);
  const RestrictedDeformation& g = r.generators[0];
  REQUIRE(!g.f.empty());
  const PrimeField& F = R.lie.field();

  RestrictedDeformation bad_f = g;
  auto& entry = bad_f.f.begin()->second;
  entry.push_back({static_cast<std::uint32_t>(R.lie.dim() - 1), 1});
  entry = F.normalize(std::move(entry));
  CHECK_FALSE(verify_deformation(R, bad_f).ok);

  RestrictedDeformation bad_omega = g;
  bad_omega.omega.resize(R.lie.dim());
  bad_omega.omega[0].push_back({1, 1});
  bad_omega.omega[0] = F.normalize(std::move(bad_omega.omega[0]));
  CHECK_FALSE(verify_deformation(R, bad_omega).ok);
}
