#pragma once

// Umbrella header: the normal gravity field of a level ellipsoid, its
// gradient and second-derivative (Eotvos) tensors, curvature diagnostics of
// level surfaces and plumblines, and point-mass disturbing fields.

#include "normalfield/core.hpp"
#include "normalfield/coords.hpp"
#include "normalfield/curvature.hpp"
#include "normalfield/disturbance.hpp"
#include "normalfield/ellipsoid.hpp"
#include "normalfield/field.hpp"
#include "normalfield/geodetic.hpp"
#include "normalfield/numdiff.hpp"
#include "normalfield/potential.hpp"
#include "normalfield/reference.hpp"
#include "normalfield/verify.hpp"
