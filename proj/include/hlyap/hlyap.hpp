#pragma once

#include "hlyap/errors.hpp"
#include "hlyap/params.hpp"
#include "hlyap/special_functions.hpp"
#include "hlyap/quadrature.hpp"
#include "hlyap/coefficient.hpp"
#include "hlyap/green_kernel.hpp"
#include "hlyap/lyapunov_bounds.hpp"
#include "hlyap/hadamard_operators.hpp"
#include "hlyap/fredholm_verifier.hpp"
