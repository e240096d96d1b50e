// AVX2/FMA implementations. This translation unit is compiled with
// -mavx2 -mfma; callers must check avx2::available() before dispatching
// here. Nothing in this file runs AVX2 instructions unless called.

#include "cyclarb/kernels.hpp"

#include <cassert>

#if defined(__x86_64__) || defined(_M_X64)
#define CYCLARB_X86 1
#include <immintrin.h>
#else
#define CYCLARB_X86 0
#endif

namespace cyclarb::kernels::avx2 {

bool available() {
#if CYCLARB_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if CYCLARB_X86

namespace {

double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

uint64_t hsum_epi64(__m256i v) {
  __m128i lo = _mm256_castsi256_si128(v);
  __m128i hi = _mm256_extracti128_si256(v, 1);
  lo = _mm_add_epi64(lo, hi);
  return static_cast<uint64_t>(_mm_extract_epi64(lo, 0)) +
         static_cast<uint64_t>(_mm_extract_epi64(lo, 1));
}

}  // namespace

double dot_f64(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a.data() + i);
    const __m256d vb = _mm256_loadu_pd(b.data() + i);
    acc = _mm256_fmadd_pd(va, vb, acc);
  }
  double sum = hsum_pd(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  const size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a.data() + i);
    const __m256d vb = _mm256_loadu_pd(b.data() + i);
    const __m256d vw = _mm256_loadu_pd(w.data() + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(va, vb), vw, acc);
  }
  double sum = hsum_pd(acc);
  for (; i < n; ++i) sum += a[i] * b[i] * w[i];
  return sum;
}

uint64_t sum_sq_u32(std::span<const uint32_t> v) {
  const size_t n = v.size();
  __m256i acc = _mm256_setzero_si256();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v.data() + i));
    // squares of even lanes (0,2,4,6) and odd lanes (1,3,5,7) as u64
    const __m256i even = _mm256_mul_epu32(x, x);
    const __m256i shifted = _mm256_srli_epi64(x, 32);
    const __m256i odd = _mm256_mul_epu32(shifted, shifted);
    acc = _mm256_add_epi64(acc, _mm256_add_epi64(even, odd));
  }
  uint64_t sum = hsum_epi64(acc);
  for (; i < n; ++i) sum += static_cast<uint64_t>(v[i]) * v[i];
  return sum;
}

namespace {

// Rotation of 4x64 lanes: lane k takes src lane (k + r) & 3.
template <int R>
__m256i rotate_epi64(__m256i v) {
  constexpr int imm = ((R & 3)) | (((1 + R) & 3) << 2) | (((2 + R) & 3) << 4) |
                      (((3 + R) & 3) << 6);
  return _mm256_permute4x64_epi64(v, imm);
}

}  // namespace

uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b) {
  assert(keys_a.size() == vals_a.size() && keys_b.size() == vals_b.size());
  const size_t na = keys_a.size();
  const size_t nb = keys_b.size();
  uint64_t acc = 0;
  size_t i = 0, j = 0;

  // Block-wise intersection: compare 4x4 key pairs per step, then discard
  // the block whose maximum cannot match anything remaining. Keys are
  // sorted and duplicate-free within each side, so every equal pair is
  // seen exactly once.
  while (i + 4 <= na && j + 4 <= nb) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys_a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys_b.data() + j));

    auto accumulate = [&](int mask, int r) {
      while (mask) {
        const int k = __builtin_ctz(static_cast<unsigned>(mask));
        acc += static_cast<uint64_t>(vals_a[i + static_cast<size_t>(k)]) *
               vals_b[j + static_cast<size_t>((k + r) & 3)];
        mask &= mask - 1;
      }
    };
    accumulate(_mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, vb))), 0);
    accumulate(_mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, rotate_epi64<1>(vb)))), 1);
    accumulate(_mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, rotate_epi64<2>(vb)))), 2);
    accumulate(_mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, rotate_epi64<3>(vb)))), 3);

    const uint64_t amax = keys_a[i + 3];
    const uint64_t bmax = keys_b[j + 3];
    if (amax <= bmax) i += 4;
    if (bmax <= amax) j += 4;
  }

  // Scalar tail over whatever remains on either side.
  while (i < na && j < nb) {
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

#else  // !CYCLARB_X86

double dot_f64(std::span<const double> a, std::span<const double> b) {
  return scalar::dot_f64(a, b);
}
double weighted_dot_f64(std::span<const double> a, std::span<const double> b,
                        std::span<const double> w) {
  return scalar::weighted_dot_f64(a, b, w);
}
uint64_t sum_sq_u32(std::span<const uint32_t> v) { return scalar::sum_sq_u32(v); }
uint64_t sparse_dot_u32(std::span<const uint64_t> keys_a, std::span<const uint32_t> vals_a,
                        std::span<const uint64_t> keys_b, std::span<const uint32_t> vals_b) {
  return scalar::sparse_dot_u32(keys_a, vals_a, keys_b, vals_b);
}

#endif

}  // namespace cyclarb::kernels::avx2
