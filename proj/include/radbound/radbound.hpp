#pragma once

#include "radbound/bounds.hpp"
#include "radbound/concentration.hpp"
#include "radbound/covariance.hpp"
#include "radbound/dataset.hpp"
#include "radbound/eigen.hpp"
#include "radbound/errors.hpp"
#include "radbound/io.hpp"
#include "radbound/kernel.hpp"
#include "radbound/matrix.hpp"
#include "radbound/mc.hpp"
#include "radbound/oracles.hpp"
#include "radbound/quadrature.hpp"
#include "radbound/report.hpp"
#include "radbound/rng.hpp"
