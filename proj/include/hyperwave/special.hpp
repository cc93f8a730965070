#pragma once

#include <complex>

namespace hyperwave {

using cplx = std::complex<double>;

/// sin(pi z) with exact zeros at the integers.
cplx sin_pi(cplx z);

/// log sin(pi z), stable for large |Im z| (no overflow). Imaginary part is
/// determined only modulo 2*pi.
cplx log_sin_pi(cplx z);

/// log Gamma(z) via a g = 7, 15-term Lanczos sum with reflection for
/// Re z < 1/2. The imaginary part is only defined modulo 2*pi, which is all
/// that exp() and real-part uses need.
cplx lgamma(cplx z);

/// Gamma(z). Poles (nonpositive integers) return infinity.
cplx gamma(cplx z);

/// 1/Gamma(z), entire; exactly zero at the nonpositive integers.
cplx rgamma(cplx z);

}  // namespace hyperwave
