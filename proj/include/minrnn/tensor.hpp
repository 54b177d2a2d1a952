#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "minrnn/common.hpp"
#include "minrnn/rng.hpp"

namespace minrnn {

// ---------------------------------------------------------------------------
// Shape: rank 1..3, canonical layout batch x time x feature, row-major.
// ---------------------------------------------------------------------------
struct Shape {
  std::array<i64, 3> d{1, 1, 1};
  int rank = 0;

  Shape() = default;
  Shape(i64 a) : d{a, 1, 1}, rank(1) {}
  Shape(i64 a, i64 b) : d{a, b, 1}, rank(2) {}
  Shape(i64 a, i64 b, i64 c) : d{a, b, c}, rank(3) {}

  i64 numel() const {
    i64 n = 1;
    for (int i = 0; i < rank; ++i) n *= d[i];
    return n;
  }
  i64 last() const { return rank == 0 ? 1 : d[rank - 1]; }
  // Time axis of the canonical layouts: [T], [T x D], [B x T x D].
  int time_axis() const { return rank == 3 ? 1 : 0; }

  bool operator==(const Shape& o) const {
    if (rank != o.rank) return false;
    for (int i = 0; i < rank; ++i)
      if (d[i] != o.d[i]) return false;
    return true;
  }
  bool operator!=(const Shape& o) const { return !(*this == o); }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rank; ++i) {
      if (i) s += "x";
      s += std::to_string(d[i]);
    }
    return s + "]";
  }
};

// ---------------------------------------------------------------------------
// Tensor<T>: immutable value type with a shared buffer. Ops never mutate
// inputs; they allocate a fresh buffer and fill it.
// ---------------------------------------------------------------------------
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape s) : shape_(s), buf_(std::make_shared<std::vector<T>>(s.numel())) {}
  Tensor(Shape s, T fill)
      : shape_(s), buf_(std::make_shared<std::vector<T>>(s.numel(), fill)) {}
  Tensor(Shape s, std::vector<T> v) : shape_(s), buf_(std::make_shared<std::vector<T>>(std::move(v))) {
    if (shape_.numel() != static_cast<i64>(buf_->size()))
      throw dim_error("Tensor: shape " + s.str() + " does not match data length " +
                      std::to_string(buf_->size()));
  }

  static Tensor zeros(Shape s) { return Tensor(s, T(0)); }
  static Tensor full(Shape s, T v) { return Tensor(s, v); }
  static Tensor scalar(T v) { return Tensor(Shape(1), std::vector<T>{v}); }

  const Shape& shape() const { return shape_; }
  int rank() const { return shape_.rank; }
  i64 dim(int i) const { return shape_.d[i]; }
  i64 numel() const { return shape_.numel(); }
  bool defined() const { return buf_ != nullptr; }

  const T* data() const { return buf_->data(); }
  T* mut() { return buf_->data(); }  // only valid before the tensor is shared

  T at(i64 i) const { return (*buf_)[i]; }
  T at(i64 i, i64 j) const { return (*buf_)[i * shape_.d[1] + j]; }
  T at(i64 i, i64 j, i64 k) const {
    return (*buf_)[(i * shape_.d[1] + j) * shape_.d[2] + k];
  }
  T& ref(i64 i) { return (*buf_)[i]; }
  T& ref(i64 i, i64 j) { return (*buf_)[i * shape_.d[1] + j]; }
  T& ref(i64 i, i64 j, i64 k) {
    return (*buf_)[(i * shape_.d[1] + j) * shape_.d[2] + k];
  }

  // Identity of the underlying buffer; used for unique-byte accounting.
  const void* buffer_id() const { return buf_.get(); }
  i64 bytes() const { return numel() * static_cast<i64>(sizeof(T)); }

  Tensor reshaped(Shape s) const {
    if (s.numel() != numel())
      throw dim_error("reshape: element count mismatch " + shape_.str() + " -> " + s.str());
    Tensor out = *this;
    out.shape_ = s;
    return out;
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out{shape_};
    const T* a = data();
    U* o = out.mut();
    const i64 n = numel();
#pragma omp parallel for schedule(static)
    for (i64 i = 0; i < n; ++i) o[i] = static_cast<U>(a[i]);
    return out;
  }

 private:
  Shape shape_;
  std::shared_ptr<std::vector<T>> buf_;
};

using Tensor32 = Tensor<float>;
using Tensor64 = Tensor<double>;

// Integer tensor for tokens, targets and masks.
class IntTensor {
 public:
  IntTensor() = default;
  explicit IntTensor(Shape s) : shape_(s), buf_(std::make_shared<std::vector<std::int32_t>>(s.numel())) {}
  IntTensor(Shape s, std::vector<std::int32_t> v)
      : shape_(s), buf_(std::make_shared<std::vector<std::int32_t>>(std::move(v))) {
    if (shape_.numel() != static_cast<i64>(buf_->size()))
      throw dim_error("IntTensor: shape/data mismatch");
  }
  const Shape& shape() const { return shape_; }
  i64 numel() const { return shape_.numel(); }
  i64 dim(int i) const { return shape_.d[i]; }
  const std::int32_t* data() const { return buf_->data(); }
  std::int32_t* mut() { return buf_->data(); }
  std::int32_t at(i64 i) const { return (*buf_)[i]; }
  std::int32_t at(i64 i, i64 j) const { return (*buf_)[i * shape_.d[1] + j]; }
  bool defined() const { return buf_ != nullptr; }

 private:
  Shape shape_;
  std::shared_ptr<std::vector<std::int32_t>> buf_;
};

// ---------------------------------------------------------------------------
// Scalar math helpers (overflow-safe).
// ---------------------------------------------------------------------------
template <typename T>
inline T sigmoid_scalar(T x) {
  if (x >= 0) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

// softplus(x) = log(1 + exp(x)), computed as max(x,0) + log1p(exp(-|x|)).
template <typename T>
inline T softplus_scalar(T x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

template <typename T>
inline T gelu_scalar(T x) {
  return T(0.5) * x * (T(1) + std::erf(x * T(0.7071067811865475)));
}
template <typename T>
inline T gelu_grad_scalar(T x) {
  const T phi = std::exp(T(-0.5) * x * x) * T(0.3989422804014327);
  return T(0.5) * (T(1) + std::erf(x * T(0.7071067811865475))) + x * phi;
}

// Candidate-state activation keeping values positive: x+0.5 for x>=0, else
// sigmoid(x). Continuous at 0 and strictly positive everywhere.
template <typename T>
inline T g_scalar(T x) {
  return x >= 0 ? x + T(0.5) : sigmoid_scalar(x);
}
template <typename T>
inline T log_g_scalar(T x) {
  return x >= 0 ? std::log(x + T(0.5)) : -softplus_scalar(-x);
}
template <typename T>
inline T g_grad_scalar(T x) {
  if (x >= 0) return T(1);
  const T s = sigmoid_scalar(x);
  return s * (T(1) - s);
}
template <typename T>
inline T log_g_grad_scalar(T x) {
  return x >= 0 ? T(1) / (x + T(0.5)) : sigmoid_scalar(-x);
}

namespace detail {

template <typename T>
inline void check_nan(const Tensor<T>& t, const char* op) {
  if (!nan_checks()) return;
  const T* p = t.data();
  const i64 n = t.numel();
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (i64 i = 0; i < n; ++i) bad = bad || (p[i] != p[i]);
  if (bad) throw domain_error(std::string(op) + ": produced NaN");
}

enum class Bcast { same, b_scalar, b_feature };

template <typename T>
inline Bcast bcast_kind(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() == b.shape()) return Bcast::same;
  if (b.numel() == 1) return Bcast::b_scalar;
  if (b.rank() == 1 && b.dim(0) == a.shape().last()) return Bcast::b_feature;
  throw dim_error(std::string(op) + ": shapes not broadcastable " + a.shape().str() +
                  " vs " + b.shape().str());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementwise ops. Broadcasting of the second operand: exact shape, scalar,
// or rank-1 vector matching the trailing feature dim.
// ---------------------------------------------------------------------------
template <typename T, typename F>
Tensor<T> map_unary(const Tensor<T>& a, F f, const char* op = "map") {
  Tensor<T> out{a.shape()};
  const T* x = a.data();
  T* o = out.mut();
  const i64 n = a.numel();
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < n; ++i) o[i] = f(x[i]);
  detail::check_nan(out, op);
  return out;
}

template <typename T, typename F>
Tensor<T> map_binary(const Tensor<T>& a, const Tensor<T>& b, F f, const char* op = "map2") {
  const auto kind = detail::bcast_kind(a, b, op);
  Tensor<T> out{a.shape()};
  const T* x = a.data();
  const T* y = b.data();
  T* o = out.mut();
  const i64 n = a.numel();
  const i64 feat = a.shape().last();
  switch (kind) {
    case detail::Bcast::same: {
#pragma omp parallel for schedule(static)
      for (i64 i = 0; i < n; ++i) o[i] = f(x[i], y[i]);
      break;
    }
    case detail::Bcast::b_scalar: {
      const T s = y[0];
#pragma omp parallel for schedule(static)
      for (i64 i = 0; i < n; ++i) o[i] = f(x[i], s);
      break;
    }
    case detail::Bcast::b_feature: {
#pragma omp parallel for schedule(static)
      for (i64 i = 0; i < n; ++i) o[i] = f(x[i], y[i % feat]);
      break;
    }
  }
  detail::check_nan(out, op);
  return out;
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  return map_binary(a, b, [](T x, T y) { return x + y; }, "add");
}
template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  return map_binary(a, b, [](T x, T y) { return x - y; }, "sub");
}
template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  return map_binary(a, b, [](T x, T y) { return x * y; }, "mul");
}
template <typename T>
Tensor<T> div(const Tensor<T>& a, const Tensor<T>& b) {
  const T* y = b.data();
  const i64 m = b.numel();
  for (i64 i = 0; i < m; ++i)
    if (y[i] == T(0)) throw domain_error("div: division by zero");
  return map_binary(a, b, [](T x, T v) { return x / v; }, "div");
}
template <typename T>
Tensor<T> neg(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return -x; }, "neg");
}
template <typename T>
Tensor<T> scale(const Tensor<T>& a, T c) {
  return map_unary(a, [c](T x) { return x * c; }, "scale");
}
template <typename T>
Tensor<T> exp(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return std::exp(x); }, "exp");
}
template <typename T>
Tensor<T> log(const Tensor<T>& a) {
  const T* x = a.data();
  const i64 n = a.numel();
  for (i64 i = 0; i < n; ++i)
    if (x[i] < T(0)) throw domain_error("log: negative input");
  // log(0) = -inf is permitted (log-space zero mass).
  return map_unary(a, [](T v) { return std::log(v); }, "log");
}
template <typename T>
Tensor<T> sigmoid(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return sigmoid_scalar(x); }, "sigmoid");
}
template <typename T>
Tensor<T> tanh(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return std::tanh(x); }, "tanh");
}
template <typename T>
Tensor<T> softplus(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return softplus_scalar(x); }, "softplus");
}
template <typename T>
Tensor<T> gelu(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return gelu_scalar(x); }, "gelu");
}
template <typename T>
Tensor<T> g_act(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return g_scalar(x); }, "g");
}
template <typename T>
Tensor<T> log_g_act(const Tensor<T>& a) {
  return map_unary(a, [](T x) { return log_g_scalar(x); }, "log_g");
}
template <typename T>
Tensor<T> maximum(const Tensor<T>& a, const Tensor<T>& b) {
  return map_binary(a, b, [](T x, T y) { return x > y ? x : y; }, "maximum");
}

// where(mask, a, b): mask is an IntTensor of 0/1 with a's shape.
template <typename T>
Tensor<T> where(const IntTensor& mask, const Tensor<T>& a, const Tensor<T>& b) {
  if (mask.shape() != a.shape() || a.shape() != b.shape())
    throw dim_error("where: all operands must share a shape");
  Tensor<T> out{a.shape()};
  const std::int32_t* m = mask.data();
  const T* x = a.data();
  const T* y = b.data();
  T* o = out.mut();
  const i64 n = a.numel();
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < n; ++i) o[i] = m[i] ? x[i] : y[i];
  detail::check_nan(out, "where");
  return out;
}

// ---------------------------------------------------------------------------
// Reductions. Partial sums use a fixed chunk grid (independent of the thread
// count) and accumulate in double so results are deterministic across runs
// and thread settings.
// ---------------------------------------------------------------------------
namespace detail {
constexpr i64 kReduceChunks = 64;

template <typename T, typename F>
double reduce_sum(const T* p, i64 n, F f) {
  if (n == 0) return 0.0;
  const i64 chunks = std::min<i64>(kReduceChunks, n);
  const i64 step = (n + chunks - 1) / chunks;
  std::array<double, kReduceChunks> partial{};
#pragma omp parallel for schedule(static)
  for (i64 c = 0; c < chunks; ++c) {
    const i64 lo = c * step, hi = std::min(n, lo + step);
    double s = 0.0;
    for (i64 i = lo; i < hi; ++i) s += f(p[i]);
    partial[static_cast<size_t>(c)] = s;
  }
  double total = 0.0;
  for (i64 c = 0; c < chunks; ++c) total += partial[static_cast<size_t>(c)];
  return total;
}
}  // namespace detail

template <typename T>
double sum(const Tensor<T>& a) {
  return detail::reduce_sum(a.data(), a.numel(), [](T x) { return double(x); });
}
template <typename T>
double mean(const Tensor<T>& a) {
  if (a.numel() == 0) throw contract_error("mean: empty tensor");
  return sum(a) / double(a.numel());
}
template <typename T>
double sum_squares(const Tensor<T>& a) {
  return detail::reduce_sum(a.data(), a.numel(), [](T x) { return double(x) * double(x); });
}
template <typename T>
T max_abs(const Tensor<T>& a) {
  const T* p = a.data();
  T m = 0;
  for (i64 i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

// ---------------------------------------------------------------------------
// Matmul kernels. Weights are stored [in x out] so the forward pass is the
// cache-friendly a[m x k] @ b[k x n] form. Rank-3 activations are treated as
// [(B*T) x k]. Each output row is owned by one thread: deterministic for any
// thread count.
// ---------------------------------------------------------------------------
namespace detail {

template <typename T>
void gemm_nn(const T* a, const T* b, T* c, i64 m, i64 k, i64 n) {
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < m; ++i) {
    T* crow = c + i * n;
    for (i64 j = 0; j < n; ++j) crow[j] = T(0);
    const T* arow = a + i * k;
    for (i64 kk = 0; kk < k; ++kk) {
      const T av = arow[kk];
      const T* brow = b + kk * n;
      for (i64 j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[m x n] = a[m x k] @ b[n x k]^T  (dot-product form, 8-way unrolled)
template <typename T>
void gemm_nt(const T* a, const T* b, T* c, i64 m, i64 k, i64 n) {
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    T* crow = c + i * n;
    for (i64 j = 0; j < n; ++j) {
      const T* brow = b + j * k;
      T s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0, s6 = 0, s7 = 0;
      i64 kk = 0;
      for (; kk + 8 <= k; kk += 8) {
        s0 += arow[kk + 0] * brow[kk + 0];
        s1 += arow[kk + 1] * brow[kk + 1];
        s2 += arow[kk + 2] * brow[kk + 2];
        s3 += arow[kk + 3] * brow[kk + 3];
        s4 += arow[kk + 4] * brow[kk + 4];
        s5 += arow[kk + 5] * brow[kk + 5];
        s6 += arow[kk + 6] * brow[kk + 6];
        s7 += arow[kk + 7] * brow[kk + 7];
      }
      T s = ((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7));
      for (; kk < k; ++kk) s += arow[kk] * brow[kk];
      crow[j] = s;
    }
  }
}

// c[k x n] = a[m x k]^T @ b[m x n]. Threads own k-ranges; the i loop runs in
// a fixed order inside each range.
template <typename T>
void gemm_tn(const T* a, const T* b, T* c, i64 m, i64 k, i64 n) {
  const int nt = threads();
  const i64 block = (k + nt - 1) / nt;
#pragma omp parallel num_threads(nt)
  {
    const i64 tid = omp_get_thread_num();
    const i64 lo = tid * block, hi = std::min(k, lo + block);
    for (i64 kk = lo; kk < hi; ++kk)
      for (i64 j = 0; j < n; ++j) c[kk * n + j] = T(0);
    for (i64 i = 0; i < m; ++i) {
      const T* arow = a + i * k;
      const T* brow = b + i * n;
      for (i64 kk = lo; kk < hi; ++kk) {
        const T av = arow[kk];
        if (av == T(0)) continue;
        T* crow = c + kk * n;
        for (i64 j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  }
}

template <typename T>
std::pair<i64, i64> as_2d(const Tensor<T>& x) {
  // leading dims flattened, trailing dim kept
  return {x.numel() / x.shape().last(), x.shape().last()};
}

}  // namespace detail

// a [m x k] or [B x T x k], b [k x n] -> [m x n] / [B x T x n]
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  if (b.rank() != 2) throw dim_error("matmul: rhs must be rank 2");
  auto [m, k] = detail::as_2d(a);
  if (k != b.dim(0))
    throw dim_error("matmul: inner dims disagree " + a.shape().str() + " @ " + b.shape().str());
  const i64 n = b.dim(1);
  Shape os = a.shape();
  os.d[os.rank - 1] = n;
  Tensor<T> out{os};
  detail::gemm_nn(a.data(), b.data(), out.mut(), m, k, n);
  detail::check_nan(out, "matmul");
  return out;
}

// a [.. x k] @ b[n x k]^T -> [.. x n]
template <typename T>
Tensor<T> matmul_nt(const Tensor<T>& a, const Tensor<T>& b) {
  if (b.rank() != 2) throw dim_error("matmul_nt: rhs must be rank 2");
  auto [m, k] = detail::as_2d(a);
  if (k != b.dim(1)) throw dim_error("matmul_nt: inner dims disagree");
  const i64 n = b.dim(0);
  Shape os = a.shape();
  os.d[os.rank - 1] = n;
  Tensor<T> out{os};
  detail::gemm_nt(a.data(), b.data(), out.mut(), m, k, n);
  detail::check_nan(out, "matmul_nt");
  return out;
}

// a [.. x k]^T @ b [.. x n] -> [k x n]; leading dims of a and b must agree.
template <typename T>
Tensor<T> matmul_tn(const Tensor<T>& a, const Tensor<T>& b) {
  auto [ma, k] = detail::as_2d(a);
  auto [mb, n] = detail::as_2d(b);
  if (ma != mb) throw dim_error("matmul_tn: leading dims disagree");
  Tensor<T> out{Shape(k, n)};
  detail::gemm_tn(a.data(), b.data(), out.mut(), ma, k, n);
  detail::check_nan(out, "matmul_tn");
  return out;
}

// ---------------------------------------------------------------------------
// Time-axis ops: cumsum, logcumsumexp, pad_front, concat, slice.
// Lanes (batch x feature) are independent; kernels walk time sequentially
// per lane with contiguous vector passes over the feature dim.
// ---------------------------------------------------------------------------
namespace detail {
struct TimeView {
  i64 batch, time, feat;  // tensor viewed as [batch x time x feat]
};
template <typename T>
TimeView time_view(const Tensor<T>& x) {
  switch (x.rank()) {
    case 1: return {1, x.dim(0), 1};
    case 2: return {1, x.dim(0), x.dim(1)};
    case 3: return {x.dim(0), x.dim(1), x.dim(2)};
    default: throw dim_error("time op: rank must be 1..3");
  }
}
}  // namespace detail

// Inclusive prefix sums along the time axis. Accumulates in double.
template <typename T>
Tensor<T> cumsum_time(const Tensor<T>& x) {
  const auto v = detail::time_view(x);
  Tensor<T> out{x.shape()};
  const T* src = x.data();
  T* dst = out.mut();
#pragma omp parallel for schedule(static)
  for (i64 b = 0; b < v.batch; ++b) {
    std::vector<double> acc(static_cast<size_t>(v.feat), 0.0);
    for (i64 t = 0; t < v.time; ++t) {
      const T* xr = src + (b * v.time + t) * v.feat;
      T* orow = dst + (b * v.time + t) * v.feat;
      for (i64 f = 0; f < v.feat; ++f) {
        acc[static_cast<size_t>(f)] += double(xr[f]);
        orow[f] = T(acc[static_cast<size_t>(f)]);
      }
    }
  }
  detail::check_nan(out, "cumsum");
  return out;
}

// y_t = log sum_{k<=t} exp(x_k) along time, running-max stabilized, double
// accumulation. -inf entries contribute zero mass; an all(-inf) prefix stays
// -inf.
template <typename T>
Tensor<T> logcumsumexp_time(const Tensor<T>& x) {
  const auto v = detail::time_view(x);
  Tensor<T> out{x.shape()};
  const T* src = x.data();
  T* dst = out.mut();
  const double ninf = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static)
  for (i64 b = 0; b < v.batch; ++b) {
    std::vector<double> mx(static_cast<size_t>(v.feat), ninf);
    std::vector<double> s(static_cast<size_t>(v.feat), 0.0);
    for (i64 t = 0; t < v.time; ++t) {
      const T* xr = src + (b * v.time + t) * v.feat;
      T* orow = dst + (b * v.time + t) * v.feat;
      for (i64 f = 0; f < v.feat; ++f) {
        const double xi = double(xr[f]);
        double& m = mx[static_cast<size_t>(f)];
        double& sf = s[static_cast<size_t>(f)];
        if (xi != ninf) {
          if (m == ninf) {
            m = xi;
            sf = 1.0;
          } else if (xi <= m) {
            sf += std::exp(xi - m);
          } else {
            sf = sf * std::exp(m - xi) + 1.0;
            m = xi;
          }
        }
        orow[f] = T(m == ninf ? ninf : m + std::log(sf));
      }
    }
  }
  detail::check_nan(out, "logcumsumexp");
  return out;
}

// Prepends one step of `value` along the time axis.
template <typename T>
Tensor<T> pad_front_time(const Tensor<T>& x, T value) {
  const auto v = detail::time_view(x);
  Shape os = x.shape();
  os.d[os.time_axis()] += 1;
  Tensor<T> out{os};
  const T* src = x.data();
  T* dst = out.mut();
#pragma omp parallel for schedule(static)
  for (i64 b = 0; b < v.batch; ++b) {
    T* base = dst + b * (v.time + 1) * v.feat;
    for (i64 f = 0; f < v.feat; ++f) base[f] = value;
    std::memcpy(base + v.feat, src + b * v.time * v.feat,
                static_cast<size_t>(v.time * v.feat) * sizeof(T));
  }
  return out;
}

template <typename T>
Tensor<T> concat_time(const Tensor<T>& a, const Tensor<T>& b) {
  const auto va = detail::time_view(a);
  const auto vb = detail::time_view(b);
  if (a.rank() != b.rank() || va.batch != vb.batch || va.feat != vb.feat)
    throw dim_error("concat: shapes incompatible " + a.shape().str() + " + " + b.shape().str());
  Shape os = a.shape();
  os.d[os.time_axis()] += b.shape().d[b.shape().time_axis()];
  Tensor<T> out{os};
  const i64 tt = va.time + vb.time;
  T* dst = out.mut();
  for (i64 bb = 0; bb < va.batch; ++bb) {
    std::memcpy(dst + bb * tt * va.feat, a.data() + bb * va.time * va.feat,
                static_cast<size_t>(va.time * va.feat) * sizeof(T));
    std::memcpy(dst + (bb * tt + va.time) * va.feat, b.data() + bb * vb.time * vb.feat,
                static_cast<size_t>(vb.time * vb.feat) * sizeof(T));
  }
  return out;
}

// Half-open [from, to) slice along time.
template <typename T>
Tensor<T> slice_time(const Tensor<T>& x, i64 from, i64 to) {
  const auto v = detail::time_view(x);
  if (from < 0 || to > v.time || from >= to)
    throw dim_error("slice: range [" + std::to_string(from) + "," + std::to_string(to) +
                    ") out of bounds for time extent " + std::to_string(v.time));
  Shape os = x.shape();
  os.d[os.time_axis()] = to - from;
  Tensor<T> out{os};
  T* dst = out.mut();
  const i64 span = to - from;
  for (i64 b = 0; b < v.batch; ++b)
    std::memcpy(dst + b * span * v.feat, x.data() + (b * v.time + from) * v.feat,
                static_cast<size_t>(span * v.feat) * sizeof(T));
  return out;
}

// ---------------------------------------------------------------------------
// Initialization.
// ---------------------------------------------------------------------------
template <typename T>
Tensor<T> uniform_tensor(Shape s, Rng& rng, double lo, double hi) {
  Tensor<T> out{s};
  T* p = out.mut();
  const i64 n = out.numel();
  for (i64 i = 0; i < n; ++i) p[i] = T(rng.uniform(lo, hi));
  return out;
}

}  // namespace minrnn
