#include <atomic>
#include <cstdlib>
#include <string_view>

#include "curvflow/error.hpp"
#include "curvflow/kernels.hpp"

namespace curvflow::kernels {

// Variants whose translation unit is not part of this build resolve to the
// scalar reference so the symbols always exist; isa_available() keeps the
// dispatcher from selecting them.
#if !defined(CURVFLOW_HAVE_AVX2_TU)
namespace avx2 {
void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  scalar::bisectional_batch(batch, out);
}
double weighted_dot(std::span<const double> w, std::span<const double> x) {
  return scalar::weighted_dot(w, x);
}
}  // namespace avx2
#endif

#if !defined(CURVFLOW_HAVE_NEON_TU)
namespace neon {
void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  scalar::bisectional_batch(batch, out);
}
double weighted_dot(std::span<const double> w, std::span<const double> x) {
  return scalar::weighted_dot(w, x);
}
}  // namespace neon
#endif

namespace {

Isa initial_isa() {
  if (const char* env = std::getenv("CURVFLOW_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(CURVFLOW_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(CURVFLOW_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw DomainError("SIMD variant " + to_string(isa) + " is not available");
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(initial_isa(), std::memory_order_relaxed); }

void bisectional_batch(const PairBatchView& batch, std::span<double> out) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::bisectional_batch(batch, out);
    case Isa::kNeon: return neon::bisectional_batch(batch, out);
    case Isa::kScalar: break;
  }
  scalar::bisectional_batch(batch, out);
}

double weighted_dot(std::span<const double> w, std::span<const double> x) {
  switch (active_isa()) {
    case Isa::kAvx2: return avx2::weighted_dot(w, x);
    case Isa::kNeon: return neon::weighted_dot(w, x);
    case Isa::kScalar: break;
  }
  return scalar::weighted_dot(w, x);
}

}  // namespace curvflow::kernels
