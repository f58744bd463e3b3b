#pragma once

#include "permstat/bench_harness.hpp"
#include "permstat/cross_tests.hpp"
#include "permstat/data_io.hpp"
#include "permstat/error.hpp"
#include "permstat/kernels.hpp"
#include "permstat/matrix.hpp"
#include "permstat/perm_engine.hpp"
#include "permstat/permutation.hpp"
#include "permstat/random.hpp"
#include "permstat/statistics.hpp"
