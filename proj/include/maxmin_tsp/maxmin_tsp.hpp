#pragma once

#include "analysis.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "instance_io.hpp"
#include "oracle.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "svg.hpp"
