#pragma once

#include "gammatrace/cache.hpp"
#include "gammatrace/clifford.hpp"
#include "gammatrace/contraction.hpp"
#include "gammatrace/emit.hpp"
#include "gammatrace/matrix.hpp"
#include "gammatrace/partitions.hpp"
#include "gammatrace/rational.hpp"
#include "gammatrace/solver.hpp"
#include "gammatrace/verify.hpp"
