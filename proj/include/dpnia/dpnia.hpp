#pragma once

#include "dpnia/error.hpp"
#include "dpnia/graph.hpp"
#include "dpnia/bitvector.hpp"
#include "dpnia/injection.hpp"
#include "dpnia/alignment.hpp"
#include "dpnia/plan.hpp"
#include "dpnia/attack.hpp"
#include "dpnia/baselines.hpp"
#include "dpnia/metrics.hpp"
#include "dpnia/synthetic.hpp"
#include "dpnia/experiment.hpp"
