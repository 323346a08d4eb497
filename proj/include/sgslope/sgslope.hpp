#pragma once

#include "sgslope/common.hpp"
#include "sgslope/distributions.hpp"
#include "sgslope/groups.hpp"
#include "sgslope/io.hpp"
#include "sgslope/kkt.hpp"
#include "sgslope/path.hpp"
#include "sgslope/penalty.hpp"
#include "sgslope/prox.hpp"
#include "sgslope/rng.hpp"
#include "sgslope/screening.hpp"
#include "sgslope/solver.hpp"
#include "sgslope/sorting.hpp"
#include "sgslope/synth.hpp"
#include "sgslope/weights.hpp"
