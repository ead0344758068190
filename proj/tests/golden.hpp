#ifndef EGAUDIN_TESTS_GOLDEN_HPP
#define EGAUDIN_TESTS_GOLDEN_HPP

// Reference values for the default three-spin system (k = 1/2,
// z = 0, 0.2, 0.4, spins 1/2, 1, 3/2) and the central spin model
// (a, b, k) = (0.2, 0.6, 0.5).

#include <array>

namespace golden {

// H_12^{x,y,z}, H_13^{x,y,z}, H_23^{x,y,z}.
inline constexpr std::array<double, 9> kCouplings{1.28522, 1.23563, 1.2293,  1.38861, 1.19509,
                                                  1.16865, 1.28522, 1.23563, 1.2293};

// Tabulated E columns. They are twice the eigenvalues of H = -R_1/2 - R_2/4.
inline constexpr std::array<double, 12> kEvenEnergies{
    -8.13147, -5.64950,  -5.48168,  -0.850805, -0.758290, -0.649792,
    -0.615993, -0.606659, -0.394121, 6.69616,   6.88050,   7.22436};
inline constexpr std::array<double, 12> kOddEnergies{
    -5.86850, -5.64331,  -5.59109,  -5.52799, -0.714459, -0.649689,
    -0.619842, -0.395533, 6.59546,   6.64346,  6.88448,   7.22431};

// Ground-state roots of the even sector.
inline constexpr double kGsReal = 0.277673;
inline constexpr double kGsPairRe = 0.261164;
inline constexpr double kGsPairIm = 0.115827;

inline constexpr double kTwoK = 3.3715;
inline constexpr double kHalfKprime = 1.07826;
inline constexpr double kK = 1.68575;

struct AcsmRow {
  int n;
  double lambda1_n, min_re, max_re, energy;
};

inline constexpr std::array<AcsmRow, 7> kAcsmRows{{
    {12, 0.327300, 2.120138, 2.120487, -0.821616},
    {20, 0.329466, 2.106036, 2.106256, -0.792253},
    {40, 0.330390, 2.095787, 2.095898, -0.772954},
    {80, 0.330681, 2.090745, 2.090800, -0.7640486},
    {100, 0.330726, 2.089743, 2.089787, -0.762322},
    {200, 0.330805, 2.087743, 2.087765, -0.758920},
    {300, 0.330828, 2.0870780, 2.0870926, -0.757801},
}};
inline constexpr AcsmRow kAcsmLimit{0, 0.330869, 2.0857505, 2.0857505, -0.755586};
inline constexpr double kClassicalLimit = -0.75558603;

}  // namespace golden

#endif  // EGAUDIN_TESTS_GOLDEN_HPP
