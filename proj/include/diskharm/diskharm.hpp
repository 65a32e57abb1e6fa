/**
 * @file diskharm.hpp
 * @brief Umbrella header: kernels, quadrature, sources, transforms, norms, heat solver and grid files.
 */
#pragma once

#include "diskharm/errors.hpp"
#include "diskharm/field.hpp"
#include "diskharm/gauss_legendre.hpp"
#include "diskharm/gridfile.hpp"
#include "diskharm/heatlab.hpp"
#include "diskharm/kernels.hpp"
#include "diskharm/quadrature.hpp"
#include "diskharm/sources.hpp"
#include "diskharm/sources_config.hpp"
#include "diskharm/transforms.hpp"
#include "diskharm/verify.hpp"
