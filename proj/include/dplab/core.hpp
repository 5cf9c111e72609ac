// core.hpp - small fixed-capacity vectors/matrices, error types, RNG and
// numeric helpers shared by the whole library.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dplab {

// Domain and target dimensions are small; capacity is fixed so hot loops
// never allocate.
inline constexpr int kMaxDim = 4;

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes (validation=2, numerical=3,
// io=4); library code throws and never exits.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error { using Error::Error; };   // bad config / bad arguments
struct NumericalError : Error { using Error::Error; };    // solver / numeric failure
struct IoError : Error { using Error::Error; };

struct IndexError : ValidationError { using ValidationError::ValidationError; };
struct DomainError : ValidationError { using ValidationError::ValidationError; };
struct EmptyRegionError : ValidationError { using ValidationError::ValidationError; };
struct ResolutionError : ValidationError { using ValidationError::ValidationError; };
struct ConstraintError : ValidationError { using ValidationError::ValidationError; };
struct BoundaryError : ValidationError { using ValidationError::ValidationError; };
struct ChartError : ValidationError { using ValidationError::ValidationError; };
struct GeometryError : ValidationError { using ValidationError::ValidationError; };
struct ScopeError : ValidationError { using ValidationError::ValidationError; };
struct AxiomError : ValidationError { using ValidationError::ValidationError; };
struct ExponentError : ValidationError { using ValidationError::ValidationError; };
struct VariantError : ValidationError { using ValidationError::ValidationError; };
struct DegeneratePairError : ValidationError { using ValidationError::ValidationError; };
struct ProjectionError : ValidationError { using ValidationError::ValidationError; };
struct SingularityError : NumericalError { using NumericalError::NumericalError; };

// ---------------------------------------------------------------------------
// Vec: point in R^n or value in R^N, n,N <= kMaxDim.
// ---------------------------------------------------------------------------

struct Vec {
  std::array<double, kMaxDim> a{};
  int n = 0;

  Vec() = default;
  explicit Vec(int dim) : n(dim) { a.fill(0.0); }
  Vec(std::initializer_list<double> xs) {
    n = static_cast<int>(xs.size());
    int i = 0;
    for (double x : xs) a[static_cast<size_t>(i++)] = x;
  }
  static Vec zero(int dim) { return Vec(dim); }
  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
  }

  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }
  int size() const { return n; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[size_t(i)] += o[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[size_t(i)] -= o[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n; ++i) a[size_t(i)] *= s;
    return *this;
  }

  friend Vec operator+(Vec x, const Vec& y) { return x += y; }
  friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
  friend Vec operator*(double s, Vec x) { return x *= s; }
  friend Vec operator*(Vec x, double s) { return x *= s; }
};

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (int i = 0; i < x.n; ++i) s += x[i] * y[i];
  return s;
}

inline double norm2_sq(const Vec& x) { return dot(x, x); }
inline double norm2(const Vec& x) { return std::sqrt(norm2_sq(x)); }

inline double dist(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (int i = 0; i < x.n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

using Point = Vec;

// ---------------------------------------------------------------------------
// Mat: gradient matrix in R^{N x n} (rows = target components, cols = axes).
// ---------------------------------------------------------------------------

struct Mat {
  std::array<double, kMaxDim * kMaxDim> a{};
  int rows = 0, cols = 0;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c) { a.fill(0.0); }

  double& operator()(int i, int j) { return a[static_cast<size_t>(i * cols + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i * cols + j)]; }

  Mat& operator-=(const Mat& o) {
    for (int k = 0; k < rows * cols; ++k) a[size_t(k)] -= o.a[size_t(k)];
    return *this;
  }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  Mat& operator*=(double s) {
    for (int k = 0; k < rows * cols; ++k) a[size_t(k)] *= s;
    return *this;
  }
  friend Mat operator*(double s, Mat x) { return x *= s; }
};

inline double frob_sq(const Mat& z) {
  double s = 0.0;
  for (int k = 0; k < z.rows * z.cols; ++k) s += z.a[size_t(k)] * z.a[size_t(k)];
  return s;
}
inline double frob(const Mat& z) { return std::sqrt(frob_sq(z)); }

inline double dot(const Mat& x, const Mat& y) {
  double s = 0.0;
  for (int k = 0; k < x.rows * x.cols; ++k) s += x.a[size_t(k)] * y.a[size_t(k)];
  return s;
}

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 streams keyed by (seed, index) so results do
// not depend on evaluation order or thread count.
// ---------------------------------------------------------------------------

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL) {}
  Rng(uint64_t seed, uint64_t stream) : Rng(seed ^ (stream * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL)) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0,1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via polar rejection (stable across platforms)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  Vec uniform_vec(int dim, double lo, double hi) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  // uniform on the unit sphere S^{dim-1}
  Vec sphere_vec(int dim) {
    while (true) {
      Vec v(dim);
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        v[i] = normal();
        s += v[i] * v[i];
      }
      if (s > 1e-24) {
        v *= 1.0 / std::sqrt(s);
        return v;
      }
    }
  }

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Halton low-discrepancy sequence, used for deterministic center sampling.
inline double halton(uint64_t index, uint64_t base) {
  double f = 1.0, r = 0.0;
  // index 0 maps to 0; callers usually start at 1
  while (index > 0) {
    f /= double(base);
    r += f * double(index % base);
    index /= base;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Misc numerics
// ---------------------------------------------------------------------------

inline constexpr double kPi = 3.14159265358979323846;

// Volume of the unit ball in R^n, via v_n = v_{n-2} * 2 pi / n.
inline double unit_ball_volume(int n) {
  double v = (n % 2 == 0) ? 1.0 : 2.0;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) v *= 2.0 * kPi / double(k);
  return v;
}

inline bool nearly_equal(double a, double b, double rel, double abs_tol = 0.0) {
  return std::abs(a - b) <= std::max(abs_tol, rel * std::max(std::abs(a), std::abs(b)));
}

// FNV-1a, used to hash configs into run manifests.
inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 1469598103934665603ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}
inline uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

}  // namespace dplab
