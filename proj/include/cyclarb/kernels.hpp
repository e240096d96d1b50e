#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cyclarb::kernels {

// Arithmetic inner loops shared by the similarity and regression code.
// Every operation has a scalar reference implementation and an AVX2
// variant; the active backend is picked once at startup from cpuid and can
// be forced with CYCLARB_KERNELS=scalar|avx2. Integer kernels are bit-exact
// across backends; floating-point kernels may differ by rounding
// (reassociation) and are equivalence-tested against the scalar reference.

enum class Backend : uint8_t { Scalar, Avx2 };

Backend active_backend();
std::string_view backend_name(Backend b);

/// Forces a backend (testing hook). Throws if the backend is unavailable
/// on this machine.
void set_backend(Backend b);

/// Sum of a[i] * b[i]. Sizes must match.
double dot_f64(std::span<const double> a, std::span<const double> b);

/// Sum of a[i] * b[i] * w[i]. Sizes must match.
double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w);

/// Sum of v[i]^2 widened to 64 bits. Exact (modulo 2^64).
uint64_t sum_sq_u32(std::span<const uint32_t> v);

/// Dot product of two sparse vectors given as sorted, duplicate-free key
/// arrays with parallel value arrays: sum over the key intersection of
/// vals_a * vals_b. Exact (modulo 2^64).
uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b);

// Per-backend entry points, exposed for equivalence tests.
namespace scalar {
double dot_f64(std::span<const double> a, std::span<const double> b);
double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w);
uint64_t sum_sq_u32(std::span<const uint32_t> v);
uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b);
}  // namespace scalar

namespace avx2 {
bool available();
double dot_f64(std::span<const double> a, std::span<const double> b);
double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w);
uint64_t sum_sq_u32(std::span<const uint32_t> v);
uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b);
}  // namespace avx2

}  // namespace cyclarb::kernels
