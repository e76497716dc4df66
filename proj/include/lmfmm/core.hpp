// Basic types shared across the library: 3-vectors, complex scalars,
// triangular (n,m) coefficient storage and a small thread-pool map.
#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lmfmm {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline const double sqrt4pi = std::sqrt(4.0 * pi);
inline constexpr cplx iu{0.0, 1.0};

// i^n for possibly negative n
inline cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double parity(int n) { return (n & 1) ? -1.0 : 1.0; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Sph {
  double r = 0.0, theta = 0.0, phi = 0.0;
};

inline Sph cart2sph(const Vec3& v) {
  Sph s;
  s.r = v.norm();
  if (s.r > 0.0) {
    double c = v.z / s.r;
    c = std::max(-1.0, std::min(1.0, c));
    s.theta = std::acos(c);
  }
  s.phi = std::atan2(v.y, v.x);
  return s;
}

// Triangular array over (n, m) with 0 <= n <= p, -n <= m <= n.
// Exactly (p+1)^2 entries; out-of-range access via at() throws.
template <class T>
class TriangularArray {
 public:
  TriangularArray() = default;
  explicit TriangularArray(int p) : p_(p), v_(std::size_t(p + 1) * (p + 1)) {}

  int order_max() const { return p_; }
  std::size_t size() const { return v_.size(); }

  T& operator()(int n, int m) {
    assert(in_range(n, m));
    return v_[std::size_t(n) * (n + 1) + m];
  }
  const T& operator()(int n, int m) const {
    assert(in_range(n, m));
    return v_[std::size_t(n) * (n + 1) + m];
  }
  T& at(int n, int m) {
    if (!in_range(n, m)) throw std::out_of_range("TriangularArray: (n,m) out of range");
    return v_[std::size_t(n) * (n + 1) + m];
  }
  const T& at(int n, int m) const {
    if (!in_range(n, m)) throw std::out_of_range("TriangularArray: (n,m) out of range");
    return v_[std::size_t(n) * (n + 1) + m];
  }
  bool in_range(int n, int m) const { return n >= 0 && n <= p_ && m >= -n && m <= n; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }

  TriangularArray& operator+=(const TriangularArray& o) {
    assert(p_ == o.p_);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }

 private:
  int p_ = -1;
  std::vector<T> v_;
};

using ComplexTriangle = TriangularArray<cplx>;

// Global worker count used by parallel_for (set once by the CLI / tests).
int hardware_threads();
void set_thread_count(int n);
int thread_count();

// Chunked parallel map over [0, n). Falls back to serial for small n.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lmfmm
