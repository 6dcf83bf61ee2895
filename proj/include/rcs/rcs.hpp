#pragma once
#ifndef RCS_RCS_HPP
#define RCS_RCS_HPP

#include "rcs/errors.hpp"
#include "rcs/experiment.hpp"
#include "rcs/io.hpp"
#include "rcs/metrics.hpp"
#include "rcs/noise_models.hpp"
#include "rcs/random.hpp"
#include "rcs/ransac.hpp"
#include "rcs/robust_stats.hpp"
#include "rcs/sparse_recovery.hpp"
#include "rcs/transform.hpp"

#endif // RCS_RCS_HPP
