#pragma once

#include "hlslab/specialfuncs.hpp"
#include "hlslab/errors.hpp"
#include "hlslab/sphere.hpp"
#include "hlslab/operators.hpp"
#include "hlslab/bubbles.hpp"
#include "hlslab/distance.hpp"
#include "hlslab/stability.hpp"
#include "hlslab/oracles.hpp"
#include "hlslab/parallel.hpp"
