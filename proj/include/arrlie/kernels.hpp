#pragma once

// Mod-p row kernels used by every field elimination. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; the variant is chosen once at runtime.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace arrlie::kernels {

enum class Isa { Scalar, Avx2 };

/// dst[i] = (dst[i] + c * src[i]) mod p. Inputs must already be reduced into [0, p).
using AxpyFn = void (*)(std::uint32_t* dst, const std::uint32_t* src, std::size_t n,
                        std::uint32_t c, std::uint32_t p);
/// v[i] = (c * v[i]) mod p.
using ScaleFn = void (*)(std::uint32_t* v, std::size_t n, std::uint32_t c, std::uint32_t p);

struct ModKernels {
    Isa isa;
    AxpyFn axpy;
    ScaleFn scale;
};

namespace scalar {
void axpy_mod(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
              std::uint32_t p);
void scale_mod(std::uint32_t* v, std::size_t n, std::uint32_t c, std::uint32_t p);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ARRLIE_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy_mod(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
              std::uint32_t p);
void scale_mod(std::uint32_t* v, std::size_t n, std::uint32_t c, std::uint32_t p);
}  // namespace avx2
#endif

bool cpu_supports(Isa isa);

/// Kernels for an explicit ISA; falls back to scalar when the CPU lacks it.
ModKernels kernels_for(Isa isa);

/// The process-wide selection: best supported ISA unless ARRLIE_SIMD=scalar.
const ModKernels& active();

std::string_view isa_name(Isa isa);

inline void axpy_mod(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src,
                     std::uint32_t c, std::uint32_t p) {
    active().axpy(dst.data(), src.data(), dst.size(), c, p);
}

}  // namespace arrlie::kernels
