#include "cyclarb/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cyclarb::kernels {

std::string_view backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

namespace {

Backend detect_backend() {
  if (const char* env = std::getenv("CYCLARB_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2") {
      if (!avx2::available()) {
        throw std::runtime_error("CYCLARB_KERNELS=avx2 but this CPU lacks AVX2/FMA");
      }
      return Backend::Avx2;
    }
    throw std::runtime_error("CYCLARB_KERNELS: expected 'scalar' or 'avx2', got '" +
                             std::string(want) + "'");
  }
  return avx2::available() ? Backend::Avx2 : Backend::Scalar;
}

Backend& backend_slot() {
  static Backend backend = detect_backend();
  return backend;
}

}  // namespace

Backend active_backend() { return backend_slot(); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2::available()) {
    throw std::runtime_error("AVX2 backend unavailable on this CPU");
  }
  backend_slot() = b;
}

namespace scalar {

double dot_f64(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] * w[i];
  return acc;
}

uint64_t sum_sq_u32(std::span<const uint32_t> v) {
  uint64_t acc = 0;
  for (uint32_t x : v) acc += static_cast<uint64_t>(x) * x;
  return acc;
}

uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b) {
  assert(keys_a.size() == vals_a.size() && keys_b.size() == vals_b.size());
  uint64_t acc = 0;
  size_t i = 0, j = 0;
  while (i < keys_a.size() && j < keys_b.size()) {
    if (keys_a[i] < keys_b[j]) {
      ++i;
    } else if (keys_b[j] < keys_a[i]) {
      ++j;
    } else {
      acc += static_cast<uint64_t>(vals_a[i]) * vals_b[j];
      ++i;
      ++j;
    }
  }
  return acc;
}

}  // namespace scalar

double dot_f64(std::span<const double> a, std::span<const double> b) {
  return active_backend() == Backend::Avx2 ? avx2::dot_f64(a, b) : scalar::dot_f64(a, b);
}

double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w) {
  return active_backend() == Backend::Avx2 ? avx2::weighted_dot_f64(a, b, w)
                                           : scalar::weighted_dot_f64(a, b, w);
}

uint64_t sum_sq_u32(std::span<const uint32_t> v) {
  return active_backend() == Backend::Avx2 ? avx2::sum_sq_u32(v) : scalar::sum_sq_u32(v);
}

uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b) {
  return active_backend() == Backend::Avx2
             ? avx2::sparse_dot_u32(keys_a, vals_a, keys_b, vals_b)
             : scalar::sparse_dot_u32(keys_a, vals_a, keys_b, vals_b);
}

}  // namespace cyclarb::kernels
