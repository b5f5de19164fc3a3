#include "lamb/kernels.hpp"

#include <atomic>
#include <cmath>

namespace lamb::kernels {

namespace scalar {

double sum_squares(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::fmax(m, std::fabs(v));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace scalar

namespace {

Isa detect() {
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

double sum_squares(std::span<const double> x) {
  return active_isa() == Isa::Avx2 ? avx2::sum_squares(x) : scalar::sum_squares(x);
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active_isa() == Isa::Avx2 ? avx2::dot(x, y) : scalar::dot(x, y);
}

double max_abs(std::span<const double> x) {
  return active_isa() == Isa::Avx2 ? avx2::max_abs(x) : scalar::max_abs(x);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (active_isa() == Isa::Avx2) {
    avx2::axpy(a, x, y);
  } else {
    scalar::axpy(a, x, y);
  }
}

}  // namespace lamb::kernels
