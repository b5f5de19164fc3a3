#pragma once
// Data-parallel reductions used by the quadrature and norm code.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// The public entry points dispatch once per process on CPU features; the
// variant-specific functions are exposed so the tests can compare them.

#include <cstddef>
#include <span>

namespace lamb::kernels {

enum class Isa { Scalar, Avx2 };

/// Variant chosen by the dispatcher for this process.
Isa active_isa();
/// Forces a variant (tests and benchmarking). Avx2 falls back to Scalar when
/// the CPU does not support it.
void force_isa(Isa isa);
bool avx2_available();

double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

namespace scalar {
double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace scalar

namespace avx2 {
double sum_squares(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace avx2

}  // namespace lamb::kernels
