#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
//
// Every kernel has a scalar implementation that defines its semantics; the
// AVX2 (x86-64) and NEON (aarch64) variants must agree with it up to
// floating-point reassociation. The variant is chosen once at runtime from
// CPU features; CURVFLOW_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string>

namespace curvflow::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string to_string(Isa isa);

/// Best variant this CPU supports (ignores overrides).
Isa detected_isa();
/// Variant currently used by the dispatching entry points.
Isa active_isa();
/// Overrides dispatch; throws DomainError if the CPU lacks the ISA.
void force_isa(Isa isa);
/// Reverts to detected_isa() (or the CURVFLOW_SIMD override).
void reset_isa();
bool isa_available(Isa isa);

/// Pairs (a, b) of complex n-vectors in component-major layout: component i
/// of pair p lives at index i * count + p of each array.
struct PairBatchView {
  int n = 0;
  std::size_t count = 0;
  const double* a_re = nullptr;
  const double* a_im = nullptr;
  const double* b_re = nullptr;
  const double* b_im = nullptr;
};

/// out[p] = 4 |a|^2 |b|^2 - 16 sum_{i<j} Im(conj(a_i) a_j) Im(b_i conj(b_j)).
void bisectional_batch(const PairBatchView& batch, std::span<double> out);

/// sum_k w[k] * x[k].
double weighted_dot(std::span<const double> w, std::span<const double> x);

namespace scalar {
void bisectional_batch(const PairBatchView& batch, std::span<double> out);
double weighted_dot(std::span<const double> w, std::span<const double> x);
}  // namespace scalar

namespace avx2 {
void bisectional_batch(const PairBatchView& batch, std::span<double> out);
double weighted_dot(std::span<const double> w, std::span<const double> x);
}  // namespace avx2

namespace neon {
void bisectional_batch(const PairBatchView& batch, std::span<double> out);
double weighted_dot(std::span<const double> w, std::span<const double> x);
}  // namespace neon

}  // namespace curvflow::kernels
