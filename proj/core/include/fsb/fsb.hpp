#pragma once

// Robust M-estimation under f-separable Bregman distortion measures:
// divergences, weight families, model families, the reweighted-mean
// estimator, unbiasedness condition checks, asymptotic covariance, and
// contamination experiments.

#include "fsb/analysis.hpp"
#include "fsb/asymptotics.hpp"
#include "fsb/csv.hpp"
#include "fsb/divergence.hpp"
#include "fsb/errors.hpp"
#include "fsb/estimator.hpp"
#include "fsb/experiment.hpp"
#include "fsb/generator.hpp"
#include "fsb/model.hpp"
#include "fsb/quadrature.hpp"
#include "fsb/rng.hpp"
#include "fsb/sampling.hpp"
#include "fsb/weight.hpp"
#include "fsb/version.hpp"
