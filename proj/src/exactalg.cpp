#include "rlie/exactalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace rlie {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw InputError("characteristic " + std::to_string(p) + " is not prime");
  if (p >= (1u << 15)) throw InputError("characteristic " + std::to_string(p) + " is too large (p < 32768)");
  inverse_.assign(p, 0);
  inverse_[1] = 1;
  for (std::uint32_t a = 2; a < p; ++a) inverse_[a] = (p - (p / a) * inverse_[p % a] % p) % p;
}

Coeff PrimeField::inv(Coeff a) const {
  if (a == 0) throw Error("division by zero in F_" + std::to_string(p_));
  return inverse_[a];
}

Coeff PrimeField::pow(Coeff a, std::uint64_t e) const {
  Coeff r = 1 % p_;
  Coeff b = a % p_;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

Coeff PrimeField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Coeff>(r);
}

std::int64_t PrimeField::to_signed(Coeff a) const {
  return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
}

Vec PrimeField::unit(std::size_t n, std::size_t i) const {
  Vec v(n, 0);
  v.at(i) = 1;
  return v;
}

void PrimeField::axpy(Vec& y, Coeff a, std::span<const Coeff> x) const {
  if (y.size() != x.size()) throw DimensionError("axpy: length mismatch");
  if (a == 0) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (y[i] + a * x[i]) % p_;
}

void PrimeField::axpy(Vec& y, Coeff a, const SparseVec& x) const {
  if (a == 0) return;
  for (const auto& t : x) y[t.index] = (y[t.index] + a * t.coeff) % p_;
}

void PrimeField::scale(Vec& v, Coeff a) const {
  for (auto& x : v) x = mul(x, a);
}

Vec PrimeField::add(const Vec& a, const Vec& b) const {
  Vec r = a;
  axpy(r, 1, b);
  return r;
}

Vec PrimeField::sub(const Vec& a, const Vec& b) const {
  Vec r = a;
  axpy(r, p_ - 1, b);
  return r;
}

Coeff PrimeField::dot(std::span<const Coeff> a, std::span<const Coeff> b) const {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<std::uint64_t>(a[i]) * b[i];
  return static_cast<Coeff>(s % p_);
}

SparseVec PrimeField::to_sparse(std::span<const Coeff> v) const {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] % p_) s.push_back({static_cast<std::uint32_t>(i), v[i] % p_});
  return s;
}

Vec PrimeField::to_dense(const SparseVec& v, std::size_t n) const {
  Vec d(n, 0);
  for (const auto& t : v) d.at(t.index) = t.coeff;
  return d;
}

SparseVec PrimeField::normalize(std::vector<Term> terms) const {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  SparseVec out;
  for (const auto& t : terms) {
    if (!out.empty() && out.back().index == t.index)
      out.back().coeff = add(out.back().coeff, t.coeff % p_);
    else
      out.push_back({t.index, t.coeff % p_});
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
  }
  return out;
}

bool is_zero(std::span<const Coeff> v) {
  return std::all_of(v.begin(), v.end(), [](Coeff c) { return c == 0; });
}

// ---------------------------------------------------------------- FpScalar

FpScalar::FpScalar(std::int64_t value, std::uint32_t p) : p_(p) {
  if (!is_prime(p)) throw InputError("characteristic " + std::to_string(p) + " is not prime");
  std::int64_t r = value % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  value_ = static_cast<std::uint32_t>(r);
}

void FpScalar::same_field(const FpScalar& o) const {
  if (o.p_ != p_) throw DimensionError("scalars over different prime fields");
}

FpScalar FpScalar::operator+(const FpScalar& o) const {
  same_field(o);
  return {(value_ + o.value_) % p_, p_, true};
}
FpScalar FpScalar::operator-(const FpScalar& o) const {
  same_field(o);
  return {(value_ + p_ - o.value_) % p_, p_, true};
}
FpScalar FpScalar::operator*(const FpScalar& o) const {
  same_field(o);
  return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(value_) * o.value_ % p_), p_, true};
}
FpScalar FpScalar::operator-() const { return {(p_ - value_) % p_, p_, true}; }
FpScalar FpScalar::inverse() const {
  if (value_ == 0) throw Error("division by zero");
  // Fermat: a^(p-2)
  std::uint64_t r = 1, b = value_, e = p_ - 2;
  while (e) {
    if (e & 1) r = r * b % p_;
    b = b * b % p_;
    e >>= 1;
  }
  return {static_cast<std::uint32_t>(r), p_, true};
}
FpScalar FpScalar::operator/(const FpScalar& o) const { return *this * o.inverse(); }

// ---------------------------------------------------------------- binomials

Coeff binomial_mod(std::uint64_t a, std::uint64_t b, std::uint32_t p) {
  if (b > a) return 0;
  std::uint64_t result = 1;
  while (a || b) {
    const std::uint64_t ad = a % p, bd = b % p;
    if (bd > ad) return 0;
    // small binomial C(ad, bd) mod p via multiplicative formula
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < bd; ++i) {
      num = num * ((ad - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    std::uint64_t inv = 1, base = den, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    result = result * (num * inv % p) % p;
    a /= p;
    b /= p;
  }
  return static_cast<Coeff>(result);
}

FpScalar lucas_binomial(std::uint64_t a, std::uint64_t b, std::uint32_t p) {
  if (!is_prime(p)) throw InputError("characteristic " + std::to_string(p) + " is not prime");
  return FpScalar(binomial_mod(a, b, p), p);
}

// ---------------------------------------------------------------- DenseMatrix

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix T(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) T(c, r) = (*this)(r, c);
  return T;
}

DenseMatrix DenseMatrix::multiply(const PrimeField& F, const DenseMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix R(rows_, o.cols_);
  std::vector<std::uint64_t> acc(o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(r, k);
      if (!a) continue;
      const Coeff* orow = o.data_.data() + k * o.cols_;
      for (std::size_t c = 0; c < o.cols_; ++c) acc[c] += a * orow[c];
    }
    for (std::size_t c = 0; c < o.cols_; ++c) R(r, c) = static_cast<Coeff>(acc[c] % F.p());
  }
  return R;
}

Vec DenseMatrix::apply(const PrimeField& F, std::span<const Coeff> v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector product: length mismatch");
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = F.dot(row(r), v);
  return out;
}

DenseMatrix DenseMatrix::add(const PrimeField& F, const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
  DenseMatrix R = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) R.data_[i] = F.add(data_[i], o.data_[i]);
  return R;
}

DenseMatrix DenseMatrix::sub(const PrimeField& F, const DenseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
  DenseMatrix R = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) R.data_[i] = F.sub(data_[i], o.data_[i]);
  return R;
}

DenseMatrix DenseMatrix::power(const PrimeField& F, std::uint64_t e) const {
  if (rows_ != cols_) throw DimensionError("matrix power of a non-square matrix");
  DenseMatrix result = identity(rows_);
  DenseMatrix base = *this;
  while (e) {
    if (e & 1) result = result.multiply(F, base);
    e >>= 1;
    if (e) base = base.multiply(F, base);
  }
  return result;
}

bool DenseMatrix::is_zero() const { return rlie::is_zero(data_); }

// ---------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(const PrimeField& F, std::size_t rows, std::size_t cols,
                           std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries)
    : cols_(cols), rows_(rows) {
  std::vector<std::vector<Term>> raw(rows);
  for (const auto& [rc, v] : entries) {
    if (rc.first >= rows || rc.second >= cols) throw DimensionError("sparse matrix entry out of range");
    raw[rc.first].push_back({static_cast<std::uint32_t>(rc.second), v % F.p()});
  }
  for (std::size_t r = 0; r < rows; ++r) rows_[r] = F.normalize(std::move(raw[r]));
}

SparseMatrix::SparseMatrix(std::size_t cols, std::vector<SparseVec> rows) : cols_(cols), rows_(std::move(rows)) {
  for (const auto& r : rows_)
    for (const auto& t : r)
      if (t.index >= cols_) throw DimensionError("sparse matrix entry out of range");
}

SparseMatrix SparseMatrix::from_dense(const PrimeField& F, const DenseMatrix& M) {
  std::vector<SparseVec> rows(M.rows());
  for (std::size_t r = 0; r < M.rows(); ++r) rows[r] = F.to_sparse(M.row(r));
  return SparseMatrix(M.cols(), std::move(rows));
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Coeff SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Term& t, std::size_t i) { return t.index < i; });
  return (it != row.end() && it->index == c) ? it->coeff : 0;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<SparseVec> t(cols_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& e : rows_[r]) t[e.index].push_back({static_cast<std::uint32_t>(r), e.coeff});
  return SparseMatrix(rows_.size(), std::move(t));
}

SparseMatrix SparseMatrix::multiply(const PrimeField& F, const SparseMatrix& o) const {
  if (cols_ != o.rows()) throw DimensionError("sparse product: inner dimensions differ");
  std::vector<SparseVec> out(rows_.size());
  std::vector<Coeff> acc(o.cols(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(o.cols(), 0);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    touched.clear();
    for (const auto& a : rows_[r])
      for (const auto& b : o.row(a.index)) {
        if (!mark[b.index]) {
          mark[b.index] = 1;
          touched.push_back(b.index);
        }
        acc[b.index] = F.add(acc[b.index], F.mul(a.coeff, b.coeff));
      }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      if (acc[c]) out[r].push_back({c, acc[c]});
      acc[c] = 0;
      mark[c] = 0;
    }
  }
  return SparseMatrix(o.cols(), std::move(out));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix D(rows_.size(), cols_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& e : rows_[r]) D(r, e.index) = e.coeff;
  return D;
}

SparseMatrix SparseMatrix::permute_rows(std::span<const std::size_t> perm) const {
  if (perm.size() != rows_.size()) throw DimensionError("row permutation has wrong length");
  std::vector<SparseVec> out;
  out.reserve(perm.size());
  for (auto i : perm) out.push_back(rows_.at(i));
  return SparseMatrix(cols_, std::move(out));
}

// ---------------------------------------------------------------- Echelon

Echelon::Echelon(const PrimeField& F, std::size_t width) : F_(F), width_(width), row_of_col_(width, -1) {}

void Echelon::reduce_lazy(Vec& v) const {
  const Coeff p = F_.p();
  const std::uint64_t step = static_cast<std::uint64_t>(p - 1) * (p - 1);
  const std::uint64_t budget = step ? (std::numeric_limits<std::uint32_t>::max() - p) / step : 0;
  std::uint64_t used = 0;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Coeff c = v[pivots_[k]] % p;
    if (!c) {
      v[pivots_[k]] = 0;
      continue;
    }
    if (used >= budget) {
      for (auto& x : v) x %= p;
      used = 0;
    }
    const Coeff f = p - c;
    const Coeff* r = rows_[k].data();
    Coeff* out = v.data();
    for (std::size_t j = 0; j < width_; ++j) out[j] += f * r[j];
    ++used;
  }
  for (auto& x : v) x %= p;
}

void Echelon::reduce(Vec& v) const {
  if (v.size() != width_) throw DimensionError("echelon: vector has wrong length");
  reduce_lazy(v);
}

bool Echelon::contains(Vec v) const {
  reduce(v);
  return is_zero(v);
}

bool Echelon::insert(const SparseVec& v) { return insert(F_.to_dense(v, width_)); }

bool Echelon::insert(Vec v) {
  reduce(v);
  std::size_t piv = width_;
  for (std::size_t j = 0; j < width_; ++j)
    if (v[j]) {
      piv = j;
      break;
    }
  if (piv == width_) return false;
  F_.scale(v, F_.inv(v[piv]));
  // keep every stored row reduced at the new pivot column
  const Coeff p = F_.p();
  for (auto& r : rows_) {
    const Coeff c = r[piv];
    if (!c) continue;
    const Coeff f = p - c;
    for (std::size_t j = 0; j < width_; ++j) r[j] = (r[j] + f * v[j]) % p;
  }
  row_of_col_[piv] = static_cast<std::int64_t>(rows_.size());
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

SubspaceBasis Echelon::basis() const {
  SubspaceBasis B(width_);
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
  for (auto k : order) {
    B.rows_.push_back(rows_[k]);
    B.pivots_.push_back(pivots_[k]);
  }
  return B;
}

SubspaceBasis Echelon::kernel() const {
  // free columns give the standard kernel basis; it is already canonical
  // after sorting by the free column and reducing
  std::vector<Vec> vecs;
  for (std::size_t fcol = 0; fcol < width_; ++fcol) {
    if (row_of_col_[fcol] >= 0) continue;
    Vec x(width_, 0);
    x[fcol] = 1;
    for (std::size_t k = 0; k < rows_.size(); ++k) x[pivots_[k]] = F_.neg(rows_[k][fcol]);
    vecs.push_back(std::move(x));
  }
  return SubspaceBasis::span(F_, width_, vecs);
}

// ---------------------------------------------------------------- SubspaceBasis

SubspaceBasis SubspaceBasis::span(const PrimeField& F, std::size_t ambient, const std::vector<Vec>& vectors) {
  Echelon E(F, ambient);
  for (const auto& v : vectors) E.insert(v);
  return E.basis();
}

SubspaceBasis SubspaceBasis::whole(const PrimeField& F, std::size_t ambient) {
  std::vector<Vec> vs;
  for (std::size_t i = 0; i < ambient; ++i) vs.push_back(F.unit(ambient, i));
  return span(F, ambient, vs);
}

Vec SubspaceBasis::reduce(const PrimeField& F, Vec v) const {
  if (v.size() != ambient_) throw DimensionError("subspace: vector has wrong length");
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Coeff c = v[pivots_[k]];
    if (c) F.axpy(v, F.neg(c), rows_[k]);
  }
  return v;
}

bool SubspaceBasis::contains(const PrimeField& F, const Vec& v) const { return is_zero(reduce(F, v)); }

bool SubspaceBasis::contains(const PrimeField& F, const SubspaceBasis& other) const {
  if (other.ambient_ != ambient_) throw DimensionError("subspace: ambient dimension mismatch");
  return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const Vec& v) { return contains(F, v); });
}

Vec SubspaceBasis::coordinates(const PrimeField& F, const Vec& v) const {
  if (!contains(F, v)) throw DimensionError("subspace: vector is not in the subspace");
  Vec c(rows_.size());
  for (std::size_t k = 0; k < rows_.size(); ++k) c[k] = v[pivots_[k]];
  return c;
}

SubspaceBasis subspace_sum(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B) {
  if (A.ambient() != B.ambient()) throw DimensionError("subspace sum: ambient dimension mismatch");
  std::vector<Vec> all = A.vectors();
  all.insert(all.end(), B.vectors().begin(), B.vectors().end());
  return SubspaceBasis::span(F, A.ambient(), all);
}

SubspaceBasis subspace_intersection(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B) {
  if (A.ambient() != B.ambient()) throw DimensionError("subspace intersection: ambient dimension mismatch");
  // Solve sum a_i A_i - sum b_j B_j = 0; every solution gives sum a_i A_i.
  const std::size_t n = A.ambient(), da = A.dim(), db = B.dim();
  DenseMatrix M(n, da + db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t r = 0; r < n; ++r) M(r, i) = A.vectors()[i][r];
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t r = 0; r < n; ++r) M(r, da + j) = F.neg(B.vectors()[j][r]);
  const SubspaceBasis K = nullspace(F, M);
  std::vector<Vec> out;
  for (const auto& k : K.vectors()) {
    Vec v(n, 0);
    for (std::size_t i = 0; i < da; ++i) F.axpy(v, k[i], A.vectors()[i]);
    out.push_back(std::move(v));
  }
  return SubspaceBasis::span(F, n, out);
}

SubspaceOps subspace_ops(const PrimeField& F, const SubspaceBasis& A, const SubspaceBasis& B) {
  return {subspace_sum(F, A, B), subspace_intersection(F, A, B)};
}

// ---------------------------------------------------------------- rank / kernel

std::size_t rank(const PrimeField& F, const DenseMatrix& M) {
  Echelon E(F, M.cols());
  for (std::size_t r = 0; r < M.rows(); ++r) E.insert(Vec(M.row(r).begin(), M.row(r).end()));
  return E.rank();
}

SubspaceBasis nullspace(const PrimeField& F, const DenseMatrix& M) {
  Echelon E(F, M.cols());
  for (std::size_t r = 0; r < M.rows(); ++r) E.insert(Vec(M.row(r).begin(), M.row(r).end()));
  return E.kernel();
}

SubspaceBasis nullspace(const PrimeField& F, const SparseMatrix& M) {
  Echelon E(F, M.cols());
  for (std::size_t r = 0; r < M.rows(); ++r)
    if (!M.row(r).empty()) E.insert(M.row(r));
  return E.kernel();
}

bool solve(const PrimeField& F, const DenseMatrix& M, const Vec& b, Vec& x) {
  if (b.size() != M.rows()) throw DimensionError("solve: right-hand side has wrong length");
  // eliminate on the augmented matrix [M | b]
  const std::size_t n = M.cols();
  Echelon E(F, n + 1);
  for (std::size_t r = 0; r < M.rows(); ++r) {
    Vec row(M.row(r).begin(), M.row(r).end());
    row.push_back(b[r]);
    E.insert(std::move(row));
  }
  const SubspaceBasis B = E.basis();
  x.assign(n, 0);
  for (std::size_t k = 0; k < B.dim(); ++k) {
    if (B.pivots()[k] == n) return false;
    x[B.pivots()[k]] = B.vectors()[k][n];
  }
  return true;
}

namespace {

// Sparse elimination state. Pivot rows are reduced against every earlier
// pivot, so an incoming row is cleared by visiting pivots in insertion order.
class SparseEliminator {
 public:
  SparseEliminator(const PrimeField& F, std::size_t cols) : F_(F), cols_(cols), owner_(cols, -1), acc_(cols, 0), mark_(cols, 0) {}

  // Returns the reduced row (possibly empty).
  SparseVec reduce(const SparseVec& row) {
    using Item = std::pair<std::int64_t, std::uint32_t>;  // (pivot order, column)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    touched_.clear();
    for (const auto& t : row) {
      touch(t.index);
      acc_[t.index] = t.coeff;
      if (owner_[t.index] >= 0) heap.push({owner_[t.index], t.index});
    }
    while (!heap.empty()) {
      const auto [ord, col] = heap.top();
      heap.pop();
      const Coeff c = acc_[col];
      if (!c) continue;
      const Coeff f = F_.neg(c);
      for (const auto& t : pivots_[ord]) {
        const bool fresh = !mark_[t.index];
        touch(t.index);
        const Coeff before = acc_[t.index];
        acc_[t.index] = F_.add(before, F_.mul(f, t.coeff));
        if (owner_[t.index] > ord && (fresh || before == 0) && acc_[t.index]) heap.push({owner_[t.index], t.index});
      }
    }
    SparseVec out;
    std::sort(touched_.begin(), touched_.end());
    for (auto c : touched_) {
      if (acc_[c]) out.push_back({c, acc_[c]});
      acc_[c] = 0;
      mark_[c] = 0;
    }
    return out;
  }

  void add_pivot(SparseVec row, std::uint32_t col) {
    const Coeff inv = F_.inv(std::lower_bound(row.begin(), row.end(), col, [](const Term& t, std::uint32_t c) { return t.index < c; })->coeff);
    for (auto& t : row) t.coeff = F_.mul(t.coeff, inv);
    owner_[col] = static_cast<std::int64_t>(pivots_.size());
    pivots_.push_back(std::move(row));
  }

  std::size_t rank() const { return pivots_.size(); }
  const std::vector<SparseVec>& pivot_rows() const { return pivots_; }

 private:
  void touch(std::uint32_t c) {
    if (!mark_[c]) {
      mark_[c] = 1;
      touched_.push_back(c);
    }
  }
  const PrimeField& F_;
  std::size_t cols_;
  std::vector<std::int64_t> owner_;
  std::vector<SparseVec> pivots_;
  std::vector<Coeff> acc_;
  std::vector<char> mark_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace

std::size_t rank(const PrimeField& F, const SparseMatrix& M, const EliminationOptions& opts) {
  const std::size_t cols = M.cols();
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < M.rows(); ++r)
    if (!M.row(r).empty()) order.push_back(r);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return M.row(a).size() < M.row(b).size(); });

  std::vector<std::size_t> colcount(cols, 0);
  for (auto r : order)
    for (const auto& t : M.row(r)) ++colcount[t.index];

  SparseEliminator E(F, cols);
  const bool dense_ok = cols <= opts.dense_width_limit;
  const double dense_at = opts.density_threshold * static_cast<double>(cols);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const SparseVec& raw = M.row(order[pos]);
    for (const auto& t : raw) --colcount[t.index];
    SparseVec red = E.reduce(raw);
    if (red.empty()) continue;
    std::uint32_t best = red.front().index;
    for (const auto& t : red)
      if (colcount[t.index] < colcount[best]) best = t.index;
    const bool too_dense = static_cast<double>(red.size()) > dense_at;
    E.add_pivot(std::move(red), best);
    if (E.rank() == cols) break;
    if (dense_ok && too_dense) {
      Echelon D(F, cols);
      for (const auto& pr : E.pivot_rows()) D.insert(pr);
      for (std::size_t q = pos + 1; q < order.size() && D.rank() < cols; ++q) D.insert(M.row(order[q]));
      return D.rank();
    }
  }
  return E.rank();
}

std::optional<DenseMatrix> inverse(const PrimeField& F, const DenseMatrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("inverse: matrix is not square");
  const std::size_t n = M.rows();
  DenseMatrix A = M, I = DenseMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && A(r, c) == 0) ++r;
    if (r == n) return std::nullopt;
    if (r != c)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(A(r, k), A(c, k));
        std::swap(I(r, k), I(c, k));
      }
    const Coeff s = F.inv(A(c, c));
    for (std::size_t k = 0; k < n; ++k) {
      A(c, k) = F.mul(A(c, k), s);
      I(c, k) = F.mul(I(c, k), s);
    }
    for (std::size_t r2 = 0; r2 < n; ++r2) {
      if (r2 == c || A(r2, c) == 0) continue;
      const Coeff f = F.neg(A(r2, c));
      for (std::size_t k = 0; k < n; ++k) {
        A(r2, k) = F.add(A(r2, k), F.mul(f, A(c, k)));
        I(r2, k) = F.add(I(r2, k), F.mul(f, I(c, k)));
      }
    }
  }
  return I;
}

}  // namespace rlie
