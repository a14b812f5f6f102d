#pragma once

// Shared constants for the exp/sigmoid kernels. Both lanes implement the same
// algorithm: clamp |x| to 45 (sigmoid saturates to an exactly representable
// value there), compute e^{-|x|} by range reduction u = n*ln2 + r with a
// split-constant ln2, a degree-13 Horner polynomial for e^r, exponent-bit
// reconstruction of 2^n, then one division t/(1+t) or 1/(1+t) by sign.

namespace grnf::kern::detail {

inline constexpr double kSigmoidClamp = 45.0;
inline constexpr double kLog2E = 1.4426950408889634074;      // 1/ln 2
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;  // high bits of ln 2
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;  // ln 2 - kLn2Hi

// 1/k! for the Horner evaluation of e^r on |r| <= ln2/2.
inline constexpr double kExpPoly[14] = {
    1.0,
    1.0,
    1.0 / 2,
    1.0 / 6,
    1.0 / 24,
    1.0 / 120,
    1.0 / 720,
    1.0 / 5040,
    1.0 / 40320,
    1.0 / 362880,
    1.0 / 3628800,
    1.0 / 39916800,
    1.0 / 479001600,
    1.0 / 6227020800.0,
};

}  // namespace grnf::kern::detail
