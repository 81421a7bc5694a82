#pragma once

#include "orgsel/errors.hpp"
#include "orgsel/random.hpp"
#include "orgsel/distributions.hpp"
#include "orgsel/model.hpp"
#include "orgsel/rules.hpp"
#include "orgsel/analytics.hpp"
#include "orgsel/batching.hpp"
#include "orgsel/ensemble.hpp"
#include "orgsel/config.hpp"
#include "orgsel/experiments.hpp"
