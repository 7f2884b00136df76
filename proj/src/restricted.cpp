#include "rlie/restricted.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace rlie {

namespace {

SparseVec ad_sparse(const LieAlgebra& L, std::size_t i, const SparseVec& v, std::vector<std::uint64_t>& acc) {
  const std::uint32_t p = L.p();
  std::vector<std::uint32_t> touched;
  for (const auto& t : v)
    for (const auto& u : L.bracket(i, t.index)) {
      if (!acc[u.index]) touched.push_back(u.index);
      acc[u.index] += static_cast<std::uint64_t>(t.coeff) * u.coeff % p + p;  // +p keeps touched entries nonzero
    }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  SparseVec out;
  for (auto k : touched) {
    const Coeff c = static_cast<Coeff>(acc[k] % p);
    acc[k] = 0;
    if (c) out.push_back({k, c});
  }
  return out;
}

// Coordinates of v in an RREF basis, read off at the pivots. v must lie in
// the span.
Vec pivot_coordinates(const SubspaceBasis& S, const Vec& v) {
  Vec c(S.dim());
  for (std::size_t k = 0; k < S.dim(); ++k) c[k] = v[S.pivots()[k]];
  return c;
}

Vec random_vec(const PrimeField& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coeff> d(0, F.p() - 1);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

Vec ad_power(const LieAlgebra& L, const Vec& x, const Vec& y, std::uint64_t k) {
  const SparseVec xs = L.field().to_sparse(x);
  Vec v = y;
  for (std::uint64_t t = 0; t < k; ++t) v = L.ad(xs, v);
  return v;
}

Vec jacobson_terms(const LieAlgebra& L, const Vec& x, const Vec& y) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (x.size() != n || y.size() != n) throw DimensionError("jacobson_terms: vector has wrong length");
  const std::uint32_t p = F.p();
  const SparseVec xs = F.to_sparse(x), ys = F.to_sparse(y);
  // W[r] = sum of all ad-words of the current length with r letters x and
  // the rest y, applied to y
  std::vector<Vec> W(1, y);
  for (std::uint32_t step = 1; step < p; ++step) {
    std::vector<Vec> next(W.size() + 1, Vec(n, 0));
    for (std::size_t r = 0; r < W.size(); ++r) {
      if (is_zero(W[r])) continue;
      next[r] = F.add(next[r], L.ad(ys, W[r]));
      next[r + 1] = F.add(next[r + 1], L.ad(xs, W[r]));
    }
    W = std::move(next);
  }
  Vec out(n, 0);
  for (std::uint32_t r = 1; r < p && r < W.size(); ++r) F.axpy(out, F.neg(F.inv(r)), W[r]);
  return out;
}

Vec eval_pmap_ordered(const RestrictedLieAlgebra& R, const Vec& x, const std::vector<std::size_t>& order) {
  const LieAlgebra& L = R.lie;
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (x.size() != n) throw DimensionError("eval_pmap: vector has wrong length");
  if (R.pmap.size() != n) throw DimensionError("eval_pmap: p-map has wrong number of images");
  Vec acc(n, 0), accp(n, 0);
  bool started = false;
  for (auto i : order) {
    if (i >= n) throw DimensionError("eval_pmap: order index out of range");
    if (!x[i]) continue;
    Vec t(n, 0);
    t[i] = x[i];
    Vec tp(n, 0);
    F.axpy(tp, F.pow(x[i], F.p()), R.pmap[i]);
    if (!started) {
      acc = std::move(t);
      accp = std::move(tp);
      started = true;
      continue;
    }
    const Vec j = jacobson_terms(L, acc, t);
    accp = F.add(F.add(accp, tp), j);
    acc = F.add(acc, t);
  }
  return accp;
}

Vec eval_pmap(const RestrictedLieAlgebra& R, const Vec& x) {
  std::vector<std::size_t> order(R.lie.dim());
  std::iota(order.begin(), order.end(), 0);
  return eval_pmap_ordered(R, x, order);
}

VerificationReport verify_restricted(const LieAlgebra& L, const std::vector<Vec>& images, int samples,
                                     std::uint64_t seed) {
  VerificationReport rep;
  const std::size_t n = L.dim();
  const PrimeField& F = L.field();
  if (images.size() != n) {
    rep.fail("expected " + std::to_string(n) + " p-map images, got " + std::to_string(images.size()));
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (images[i].size() != n) {
      rep.fail("p-map image of " + L.labels()[i] + " has wrong length");
      return rep;
    }
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const SparseVec img = F.to_sparse(images[i]);
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec v{{static_cast<std::uint32_t>(j), 1}};
      for (std::uint32_t k = 0; k < F.p() && !v.empty(); ++k) v = ad_sparse(L, i, v, acc);
      Vec lhs = L.ad(img, F.unit(n, j));
      if (F.to_sparse(lhs) != v) {
        rep.fail("ad(x^[p]) != (ad x)^p at basis element " + L.labels()[i] + " (acting on " + L.labels()[j] + ")");
        break;
      }
    }
  }
  if (!rep.ok) return rep;
  RestrictedLieAlgebra R{L, images};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples && n > 0; ++s) {
    const Vec x = random_vec(F, n, rng), y = random_vec(F, n, rng);
    const Vec px = eval_pmap(R, x);
    if (L.bracket(px, y) != ad_power(L, x, y, F.p())) rep.fail("ad(x^[p]) != (ad x)^p on a random vector");
    const Coeff lambda = static_cast<Coeff>(1 + rng() % (F.p() - 1));
    Vec lx = x;
    F.scale(lx, lambda);
    Vec expect = px;
    F.scale(expect, F.pow(lambda, F.p()));
    if (eval_pmap(R, lx) != expect) rep.fail("(a x)^[p] != a^p x^[p] on a random vector");
    if (!rep.ok) break;
  }
  return rep;
}

RestrictedLieAlgebra make_restricted(LieAlgebra L, std::vector<Vec> images) {
  const auto rep = verify_restricted(L, images);
  if (!rep.ok) throw PreconditionError("not a p-map: " + rep.failures.front());
  return RestrictedLieAlgebra{std::move(L), std::move(images)};
}

SubspaceBasis p_closure(const RestrictedLieAlgebra& R, const SubspaceBasis& S) {
  const LieAlgebra& L = R.lie;
  if (S.ambient() != L.dim()) throw DimensionError("p_closure: subspace has wrong ambient dimension");
  if (S.dim() == 0) return S;
  SubspaceBasis T = generated_subalgebra(L, S.vectors());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Vec> extra;
    for (const auto& b : T.vectors()) {
      Vec v = eval_pmap(R, b);
      if (!T.contains(L.field(), v)) extra.push_back(std::move(v));
    }
    if (!extra.empty()) {
      std::vector<Vec> gens = T.vectors();
      gens.insert(gens.end(), extra.begin(), extra.end());
      T = generated_subalgebra(L, gens);
      changed = true;
    }
  }
  return T;
}

SubspaceBasis p_ideal_spin(const RestrictedLieAlgebra& R, const Vec& seed) {
  const LieAlgebra& L = R.lie;
  SubspaceBasis I = ideal_spin(L, seed);
  while (true) {
    std::vector<Vec> extra;
    for (const auto& b : I.vectors()) {
      Vec v = eval_pmap(R, b);
      if (!I.contains(L.field(), v)) extra.push_back(std::move(v));
    }
    if (extra.empty()) return I;
    std::vector<Vec> gens = I.vectors();
    gens.insert(gens.end(), extra.begin(), extra.end());
    I = ideal_generated(L, gens);
  }
}

std::optional<std::vector<Vec>> induced_pmap(const LieAlgebra& L) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (center(L).dim() != 0) throw PreconditionError("induced_pmap: the center is nonzero");
  const std::uint32_t p = F.p();
  // powers[i][j] = (ad e_i)^p e_j
  std::vector<std::vector<SparseVec>> powers(n, std::vector<SparseVec>(n));
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseVec v{{static_cast<std::uint32_t>(j), 1}};
      for (std::uint32_t k = 0; k < p && !v.empty(); ++k) v = ad_sparse(L, i, v, acc);
      powers[i][j] = std::move(v);
    }
  // rows: component k of [y, e_j] = sum_a y_a c_{a j}^k, augmented with the
  // right-hand sides of all n systems
  Echelon E(F, 2 * n);
  std::size_t lhs_rank = 0;
  for (std::size_t j = 0; j < n && lhs_rank < n; ++j) {
    std::vector<Vec> rows(n);
    for (std::size_t a = 0; a < n; ++a)
      for (const auto& t : L.bracket(a, j)) {
        if (rows[t.index].empty()) rows[t.index].assign(2 * n, 0);
        rows[t.index][a] = t.coeff;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& t : powers[i][j]) {
        if (rows[t.index].empty()) rows[t.index].assign(2 * n, 0);
        rows[t.index][n + i] = t.coeff;
      }
    for (auto& r : rows)
      if (!r.empty()) E.insert(std::move(r));
    lhs_rank = 0;
    for (auto piv : E.pivots()) {
      if (piv >= n) return std::nullopt;  // inconsistent system
      ++lhs_rank;
    }
  }
  if (lhs_rank < n) throw PreconditionError("induced_pmap: ad is not injective");
  const SubspaceBasis B = E.basis();
  std::vector<Vec> images(n, Vec(n, 0));
  for (std::size_t k = 0; k < B.dim(); ++k)
    for (std::size_t i = 0; i < n; ++i) images[i][B.pivots()[k]] = B.vectors()[k][n + i];
  for (std::size_t i = 0; i < n; ++i) {
    const SparseVec y = F.to_sparse(images[i]);
    for (std::size_t j = 0; j < n; ++j) {
      Vec lhs = L.ad(y, F.unit(n, j));
      if (F.to_sparse(lhs) != powers[i][j]) return std::nullopt;
    }
  }
  return images;
}

// ---------------------------------------------------------------- matrices

Vec vectorize(const SparseMatrix& M) {
  const std::size_t n = M.cols();
  Vec v(M.rows() * n, 0);
  for (std::size_t r = 0; r < M.rows(); ++r)
    for (const auto& t : M.row(r)) v[r * n + t.index] = t.coeff;
  return v;
}

namespace {

SparseMatrix unvectorize(const Vec& v, std::size_t n) {
  std::vector<SparseVec> rows(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (const Coeff x = v[r * n + c]) rows[r].push_back({static_cast<std::uint32_t>(c), x});
  return SparseMatrix(n, std::move(rows));
}

}  // namespace

SparseMatrix commutator(const PrimeField& F, const SparseMatrix& A, const SparseMatrix& B) {
  const SparseMatrix AB = A.multiply(F, B), BA = B.multiply(F, A);
  std::vector<SparseVec> rows(AB.rows());
  for (std::size_t r = 0; r < AB.rows(); ++r) {
    std::vector<Term> terms(AB.row(r).begin(), AB.row(r).end());
    for (const auto& t : BA.row(r)) terms.push_back({t.index, F.neg(t.coeff)});
    rows[r] = F.normalize(std::move(terms));
  }
  return SparseMatrix(AB.cols(), std::move(rows));
}

SparseMatrix matrix_power(const PrimeField& F, const SparseMatrix& A, std::uint64_t e) {
  if (A.rows() != A.cols()) throw DimensionError("matrix_power: matrix is not square");
  std::vector<SparseVec> id(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) id[i] = {{static_cast<std::uint32_t>(i), 1}};
  SparseMatrix result(A.cols(), std::move(id)), base = A;
  while (e) {
    if (e & 1) result = result.multiply(F, base);
    e >>= 1;
    if (e) base = base.multiply(F, base);
  }
  return result;
}

SparseMatrix sparse_ad_matrix(const LieAlgebra& L, std::size_t i) {
  const std::size_t n = L.dim();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries;
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& t : L.bracket(i, j)) entries.push_back({{t.index, j}, t.coeff});
  return SparseMatrix(L.field(), n, n, std::move(entries));
}

MatrixLieAlgebra matrix_lie_algebra(const PrimeField& F, std::size_t n, const std::vector<SparseMatrix>& gens,
                                    const MatrixClosureOptions& opts) {
  for (const auto& g : gens)
    if (g.rows() != n || g.cols() != n) throw DimensionError("matrix_lie_algebra: generator has wrong shape");
  const std::size_t width = n * n;
  Echelon E(F, width);
  std::vector<SparseMatrix> elems;
  auto try_add = [&](SparseMatrix M) {
    if (M.is_zero()) return;
    if (E.insert(vectorize(M))) elems.push_back(std::move(M));
  };
  for (const auto& g : gens) try_add(g);
  const std::size_t initial = elems.size();
  for (std::size_t idx = 0; idx < elems.size(); ++idx) {
    if (opts.p_closed) try_add(matrix_power(F, elems[idx], F.p()));
    for (std::size_t j = 0; j < idx; ++j) {
      if (opts.assume_subalgebra && idx < initial) break;
      try_add(commutator(F, elems[idx], elems[j]));
    }
  }
  MatrixLieAlgebra out{n, E.basis(), {}, LieAlgebra(F, {}, {}), {}};
  const std::size_t d = out.space.dim();
  for (const auto& v : out.space.vectors()) out.matrices.push_back(unvectorize(v, n));
  BracketTable table;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      const Vec c = pivot_coordinates(out.space, vectorize(commutator(F, out.matrices[a], out.matrices[b])));
      if (!is_zero(c)) table[{a, b}] = F.to_sparse(c);
    }
  std::vector<std::string> labels;
  for (auto q : out.space.pivots()) {
    const std::size_t r = q / n, c = q % n;
    labels.push_back(opts.label ? opts.label(r, c) : "E(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");
  }
  out.lie = LieAlgebra(F, std::move(labels), table);
  std::vector<Vec> pm;
  for (const auto& M : out.matrices) {
    Vec v = vectorize(matrix_power(F, M, F.p()));
    if (!opts.p_closed && !out.space.contains(F, v)) {
      pm.clear();
      break;
    }
    pm.push_back(pivot_coordinates(out.space, v));
  }
  out.pmap = std::move(pm);
  return out;
}

// ---------------------------------------------------------------- derivations

DerivationAlgebra derivation_algebra(const LieAlgebra& L) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  // unknown x_{m,a} = component m of D(e_a), index m*n + a
  Grading g = L.grading() ? *L.grading() : Grading::trivial(n);
  std::map<Weight, std::vector<std::size_t>> blocks;
  std::vector<std::size_t> local(n * n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a) {
      auto& b = blocks[g.sub(g.weights[m], g.weights[a])];
      local[m * n + a] = b.size();
      b.push_back(m * n + a);
    }
  std::map<Weight, std::vector<SparseVec>> rows;
  std::vector<std::size_t> firsts;
  if (n <= 64) {
    firsts.resize(n);
    std::iota(firsts.begin(), firsts.end(), 0);
  } else {
    firsts = generating_set(L);
  }
  for (auto a : firsts)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || (n <= 64 && b < a)) continue;
      const Weight shift = g.sub(g.zero(), g.add(g.weights[a], g.weights[b]));
      std::map<std::size_t, std::vector<Term>> eq;  // keyed by component m
      for (const auto& t : L.bracket(a, b))
        for (std::size_t m = 0; m < n; ++m) eq[m].push_back({static_cast<std::uint32_t>(m * n + t.index), t.coeff});
      for (std::size_t k = 0; k < n; ++k) {
        for (const auto& t : L.bracket(k, b)) eq[t.index].push_back({static_cast<std::uint32_t>(k * n + a), F.neg(t.coeff)});
        for (const auto& t : L.bracket(a, k)) eq[t.index].push_back({static_cast<std::uint32_t>(k * n + b), F.neg(t.coeff)});
      }
      for (auto& [m, terms] : eq) {
        SparseVec row = F.normalize(std::move(terms));
        if (row.empty()) continue;
        const Weight w = g.add(g.weights[m], shift);
        for (auto& t : row) t.index = static_cast<std::uint32_t>(local[t.index]);
        std::sort(row.begin(), row.end(), [](const Term& x, const Term& y) { return x.index < y.index; });
        rows[w].push_back(std::move(row));
      }
    }
  std::vector<SparseMatrix> gens;
  for (const auto& [w, unknowns] : blocks) {
    auto it = rows.find(w);
    std::vector<SparseVec> r = it == rows.end() ? std::vector<SparseVec>{} : it->second;
    const SubspaceBasis K = nullspace(F, SparseMatrix(unknowns.size(), std::move(r)));
    for (const auto& v : K.vectors()) {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries;
      for (std::size_t l = 0; l < v.size(); ++l)
        if (v[l]) entries.push_back({{unknowns[l] / n, unknowns[l] % n}, v[l]});
      gens.emplace_back(F, n, n, std::move(entries));
    }
  }
  MatrixClosureOptions opts;
  opts.assume_subalgebra = true;
  opts.p_closed = true;
  opts.label = [](std::size_t r, std::size_t c) { return "D(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")"; };
  MatrixLieAlgebra M = matrix_lie_algebra(F, n, gens, opts);
  if (M.space.dim() != gens.size()) throw Error("derivation_algebra: derivations are not closed");
  DerivationAlgebra out{RestrictedLieAlgebra{M.lie, M.pmap}, M.matrices, {}};
  for (std::size_t i = 0; i < n; ++i) out.ad.push_back(pivot_coordinates(M.space, vectorize(sparse_ad_matrix(L, i))));
  return out;
}

// ---------------------------------------------------------------- envelopes

Envelope minimal_p_envelope(const LieAlgebra& M) {
  const PrimeField& F = M.field();
  const std::size_t n = M.dim();
  if (center(M).dim() != 0) throw PreconditionError("minimal_p_envelope: the center is nonzero, ad is not injective");
  if (auto images = induced_pmap(M)) {
    Envelope e{RestrictedLieAlgebra{M, std::move(*images)}, {}};
    for (std::size_t i = 0; i < n; ++i) e.ad.push_back(F.unit(n, i));
    return e;
  }
  std::vector<SparseMatrix> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(sparse_ad_matrix(M, i));
  MatrixClosureOptions opts;
  opts.assume_subalgebra = true;
  opts.p_closed = true;
  MatrixLieAlgebra A = matrix_lie_algebra(F, n, gens, opts);
  // label basis vectors by the element of M they come from where possible
  std::vector<Vec> ad;
  for (const auto& g : gens) ad.push_back(pivot_coordinates(A.space, vectorize(g)));
  std::vector<std::string> labels = A.lie.labels();
  for (std::size_t i = 0; i < n; ++i) {
    const SparseVec c = F.to_sparse(ad[i]);
    if (c.size() == 1 && c[0].coeff == 1) labels[c[0].index] = "ad(" + M.labels()[i] + ")";
  }
  std::size_t extra = 0;
  for (auto& l : labels)
    if (l.rfind("ad(", 0) != 0) l = "p" + std::to_string(extra++);
  LieAlgebra lie(F, std::move(labels), A.lie.brackets());
  return Envelope{RestrictedLieAlgebra{std::move(lie), A.pmap}, std::move(ad)};
}

// ---------------------------------------------------------------- simplicity

SimplicityResult is_restricted_simple(const RestrictedLieAlgebra& R, const SimplicityOptions& opts) {
  const LieAlgebra& L = R.lie;
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (n == 0) return {Simplicity::not_simple, "zero algebra"};
  if (L.brackets().empty()) return {Simplicity::not_simple, "abelian"};
  const std::size_t seeds = n <= 64 ? n : 16;
  for (std::size_t i = 0; i < seeds; ++i) {
    const std::size_t idx = (i * n) / seeds;
    const SubspaceBasis I = p_ideal_spin(R, F.unit(n, idx));
    if (I.dim() != n)
      return {Simplicity::not_simple,
              "p-ideal generated by " + L.labels()[idx] + " has dimension " + std::to_string(I.dim())};
  }
  const SubspaceBasis whole = SubspaceBasis::whole(F, n);
  const SubspaceBasis D = derived_algebra(L, whole);
  const auto s = is_simple(subalgebra(L, D), opts);
  if (s.verdict != Simplicity::simple) return {s.verdict, "derived algebra: " + s.reason};
  if (centralizer(L, D, whole).dim() != 0) return {Simplicity::not_simple, "derived algebra has a nonzero centralizer"};
  const SubspaceBasis C = p_closure(R, D);
  if (C.dim() != n)
    return {Simplicity::not_simple, "p-closure of the derived algebra has dimension " + std::to_string(C.dim())};
  return {Simplicity::simple, "derived algebra simple with zero centralizer and full p-closure"};
}

BijectionReport simple_to_restricted(const LieAlgebra& M, const SimplicityOptions& opts) {
  BijectionReport rep;
  rep.input_dim = M.dim();
  const auto s = is_simple(M, opts);
  if (s.verdict != Simplicity::simple) {
    rep.fail("input is not simple (" + s.reason + ")");
    return rep;
  }
  const Envelope E = minimal_p_envelope(M);
  const PrimeField& F = M.field();
  rep.envelope_dim = E.algebra.lie.dim();
  const auto rs = is_restricted_simple(E.algebra, opts);
  if (rs.verdict != Simplicity::simple) rep.fail("envelope is not restricted-simple (" + rs.reason + ")");
  const SubspaceBasis D = derived_algebra(E.algebra.lie, SubspaceBasis::whole(F, rep.envelope_dim));
  rep.derived_dim = D.dim();
  if (!(D == SubspaceBasis::span(F, rep.envelope_dim, E.ad))) rep.fail("derived algebra of the envelope is not ad(M)");
  rep.closure_dim = p_closure(E.algebra, D).dim();
  if (rep.closure_dim != rep.envelope_dim) rep.fail("p-closure of the derived algebra is not the envelope");
  return rep;
}

BijectionReport restricted_to_simple(const RestrictedLieAlgebra& L, const SimplicityOptions& opts) {
  BijectionReport rep;
  rep.input_dim = L.lie.dim();
  const auto rs = is_restricted_simple(L, opts);
  if (rs.verdict != Simplicity::simple) {
    rep.fail("input is not restricted-simple (" + rs.reason + ")");
    return rep;
  }
  const PrimeField& F = L.lie.field();
  const SubspaceBasis D = derived_algebra(L.lie, SubspaceBasis::whole(F, rep.input_dim));
  rep.derived_dim = D.dim();
  const auto s = is_simple(subalgebra(L.lie, D), opts);
  if (s.verdict != Simplicity::simple) rep.fail("derived algebra is not simple (" + s.reason + ")");
  rep.closure_dim = p_closure(L, D).dim();
  if (rep.closure_dim != rep.input_dim) rep.fail("p-closure of the derived algebra is proper");
  return rep;
}

}  // namespace rlie
