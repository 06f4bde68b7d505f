#pragma once

#include "fractal_zeta/acceptance.hpp"
#include "fractal_zeta/balanced_measure.hpp"
#include "fractal_zeta/config.hpp"
#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/io.hpp"
#include "fractal_zeta/linalg.hpp"
#include "fractal_zeta/model_spec.hpp"
#include "fractal_zeta/models.hpp"
#include "fractal_zeta/numeric.hpp"
#include "fractal_zeta/oracles.hpp"
#include "fractal_zeta/polydyn.hpp"
#include "fractal_zeta/polynomial.hpp"
#include "fractal_zeta/riemann.hpp"
#include "fractal_zeta/spectrum.hpp"
#include "fractal_zeta/zeta.hpp"
#include "fractal_zeta/zeta_result.hpp"
