#pragma once

#include "errors.hpp"
#include "rational.hpp"
#include "real.hpp"
#include "polynomial.hpp"
#include "sequences.hpp"
#include "kernels.hpp"
#include "polybasis.hpp"
#include "solvers.hpp"
#include "approx.hpp"
#include "config.hpp"
