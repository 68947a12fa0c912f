#include "arrlie/kernels.hpp"

#include <cstdlib>
#include <cstring>

#ifdef ARRLIE_HAVE_AVX2_KERNELS
#include <immintrin.h>
#endif

namespace arrlie::kernels {

namespace scalar {

void axpy_mod(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
              std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t t = std::uint64_t(c) * src[i] % p + dst[i];
        dst[i] = static_cast<std::uint32_t>(t >= p ? t - p : t);
    }
}

void scale_mod(std::uint32_t* v, std::size_t n, std::uint32_t c, std::uint32_t p) {
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<std::uint32_t>(std::uint64_t(c) * v[i] % p);
}

}  // namespace scalar

#ifdef ARRLIE_HAVE_AVX2_KERNELS
namespace avx2 {
namespace {

// Montgomery arithmetic with R = 2^32; valid for odd p < 2^31.
struct Montgomery {
    std::uint32_t p;
    std::uint32_t pinv;  // -p^{-1} mod 2^32

    explicit Montgomery(std::uint32_t mod) : p(mod) {
        std::uint32_t inv = 1;
        for (int i = 0; i < 5; ++i) inv *= 2 - mod * inv;
        pinv = 0u - inv;
    }
    std::uint32_t to_mont(std::uint32_t c) const {
        return static_cast<std::uint32_t>((std::uint64_t(c) << 32) % p);
    }
};

__attribute__((target("avx2"))) inline __m256i min_sub(__m256i x, __m256i vp) {
    return _mm256_min_epu32(x, _mm256_sub_epi32(x, vp));
}

// Lanes of s times the Montgomery constant, reduced into [0, p).
__attribute__((target("avx2"))) inline __m256i mont_mul(__m256i s, __m256i vc, __m256i vp64,
                                                       __m256i vpinv, __m256i vp32) {
    __m256i t_even = _mm256_mul_epu32(s, vc);
    __m256i t_odd = _mm256_mul_epu32(_mm256_srli_epi64(s, 32), vc);
    __m256i m_even = _mm256_mul_epu32(t_even, vpinv);
    __m256i m_odd = _mm256_mul_epu32(t_odd, vpinv);
    __m256i u_even = _mm256_srli_epi64(_mm256_add_epi64(t_even, _mm256_mul_epu32(m_even, vp64)), 32);
    __m256i u_odd = _mm256_add_epi64(t_odd, _mm256_mul_epu32(m_odd, vp64));
    // u_odd keeps its result in the high half, which is where odd lanes live.
    __m256i u = _mm256_blend_epi32(u_even, u_odd, 0b10101010);
    return min_sub(u, vp32);
}

}  // namespace

__attribute__((target("avx2"))) void axpy_mod(std::uint32_t* dst, const std::uint32_t* src,
                                              std::size_t n, std::uint32_t c, std::uint32_t p) {
    if (p % 2 == 0 || c == 0) {
        if (c != 0) scalar::axpy_mod(dst, src, n, c, p);
        return;
    }
    Montgomery mont(p);
    const __m256i vc = _mm256_set1_epi64x(mont.to_mont(c));
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i vp64 = _mm256_set1_epi64x(p);
    const __m256i vpinv = _mm256_set1_epi64x(mont.pinv);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i prod = mont_mul(s, vc, vp64, vpinv, vp);
        d = min_sub(_mm256_add_epi32(d, prod), vp);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
    }
    scalar::axpy_mod(dst + i, src + i, n - i, c, p);
}

__attribute__((target("avx2"))) void scale_mod(std::uint32_t* v, std::size_t n, std::uint32_t c,
                                               std::uint32_t p) {
    if (p % 2 == 0 || c == 0) {
        scalar::scale_mod(v, n, c, p);
        return;
    }
    Montgomery mont(p);
    const __m256i vc = _mm256_set1_epi64x(mont.to_mont(c));
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i vp64 = _mm256_set1_epi64x(p);
    const __m256i vpinv = _mm256_set1_epi64x(mont.pinv);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(v + i), mont_mul(s, vc, vp64, vpinv, vp));
    }
    scalar::scale_mod(v + i, n - i, c, p);
}

}  // namespace avx2
#endif

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#ifdef ARRLIE_HAVE_AVX2_KERNELS
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

ModKernels kernels_for(Isa isa) {
#ifdef ARRLIE_HAVE_AVX2_KERNELS
    if (isa == Isa::Avx2 && cpu_supports(Isa::Avx2))
        return {Isa::Avx2, &avx2::axpy_mod, &avx2::scale_mod};
#endif
    (void)isa;
    return {Isa::Scalar, &scalar::axpy_mod, &scalar::scale_mod};
}

const ModKernels& active() {
    static const ModKernels selected = [] {
        const char* env = std::getenv("ARRLIE_SIMD");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return kernels_for(Isa::Scalar);
        return kernels_for(Isa::Avx2);
    }();
    return selected;
}

std::string_view isa_name(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

}  // namespace arrlie::kernels
