#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace pbbf {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace pbbf
