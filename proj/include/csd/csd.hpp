#pragma once

#include "csd/dilog.hpp"
#include "csd/group.hpp"
#include "csd/identity.hpp"
#include "csd/json_io.hpp"
#include "csd/lattice.hpp"
#include "csd/rational.hpp"
#include "csd/scatter.hpp"
#include "csd/series.hpp"
