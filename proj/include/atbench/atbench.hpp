#ifndef ATBENCH_ATBENCH_HPP
#define ATBENCH_ATBENCH_HPP

#include "atbench/cache.hpp"
#include "atbench/constraint.hpp"
#include "atbench/domain.hpp"
#include "atbench/error.hpp"
#include "atbench/evaluator.hpp"
#include "atbench/experiment.hpp"
#include "atbench/methodology.hpp"
#include "atbench/optimizers/adaptive_tabu_grey_wolf.hpp"
#include "atbench/optimizers/baselines.hpp"
#include "atbench/optimizers/common.hpp"
#include "atbench/optimizers/hybrid_vndx.hpp"
#include "atbench/random.hpp"
#include "atbench/registry.hpp"
#include "atbench/space.hpp"
#include "atbench/value.hpp"

#endif // ATBENCH_ATBENCH_HPP
