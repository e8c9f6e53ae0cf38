#pragma once

#include "balanced.hpp"
#include "certify.hpp"
#include "dense_eigen.hpp"
#include "driver.hpp"
#include "gaussian.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "orthoseps.hpp"
#include "parallel.hpp"
#include "partitioner.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "spectral.hpp"
