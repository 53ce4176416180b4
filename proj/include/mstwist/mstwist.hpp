#pragma once

// Umbrella header.

#include "mstwist/errors.hpp"
#include "mstwist/scalar.hpp"
#include "mstwist/specfun.hpp"
#include "mstwist/multipoly.hpp"
#include "mstwist/sympoly.hpp"
#include "mstwist/lfunc.hpp"
#include "mstwist/spectrum.hpp"
#include "mstwist/wpoly.hpp"
#include "mstwist/extrapolate.hpp"
#include "mstwist/twist.hpp"
