#pragma once

// Generated by tests/oracles/generate.py (mpmath, 50 digits). Do not edit.

namespace oracle {

inline constexpr double kSawtoothB1 = 2.0;
inline constexpr double kSawtoothB2 = -1.0;
inline constexpr double kSawtoothB3 = 0.66666666666666667;
inline constexpr double kSawtoothB4 = -0.5;
inline constexpr double kSawtoothB5 = 0.4;
inline constexpr double kOddCubeSum1e6 = 2.1035995805287899;
inline constexpr double kOddCubeSum1000 = 2.1035990805297899;
inline constexpr double kCosFamilyIntegral = 0.66666666666666667;
inline constexpr double kPointNineTo50 = 0.0051537752073201133;
inline constexpr double kDoublePointNineTo50 = 0.0051537752073201197;
inline constexpr double kSinOverSquareAt1N1000 = 1.0139590292911742;
inline constexpr double kCosCos_2_5_L2p5 = 2.0940034964349994e-54;
inline constexpr double kSinIntegral0Pi = 2.0;

}  // namespace oracle
