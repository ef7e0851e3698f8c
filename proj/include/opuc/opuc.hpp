#pragma once

// Everything in one include.

#include "opuc/cmv.hpp"
#include "opuc/error.hpp"
#include "opuc/format.hpp"
#include "opuc/geronimus.hpp"
#include "opuc/laurent.hpp"
#include "opuc/perturb.hpp"
#include "opuc/poly.hpp"
#include "opuc/precision.hpp"
#include "opuc/schur.hpp"
#include "opuc/spectra.hpp"
#include "opuc/szego.hpp"
#include "opuc/verify.hpp"
