#pragma once

#include "census.hpp"
#include "constructions.hpp"
#include "errors.hpp"
#include "ff.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "runner.hpp"
#include "stats.hpp"
#include "variety.hpp"
