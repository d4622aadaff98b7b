#pragma once

#include "cube/error.hpp"
#include "cube/rational.hpp"
#include "cube/core.hpp"
#include "cube/walsh.hpp"
#include "cube/gray.hpp"
#include "cube/parallel.hpp"
#include "cube/rng.hpp"
#include "cube/polynomial.hpp"
#include "cube/projection.hpp"
#include "cube/hermite.hpp"
#include "cube/combinatorics.hpp"
#include "cube/lp.hpp"
#include "cube/sidon.hpp"
#include "cube/verify.hpp"
#include "cube/family_json.hpp"
