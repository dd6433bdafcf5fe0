#pragma once

#include "dtph/error.hpp"
#include "dtph/geometric.hpp"
#include "dtph/interconnect.hpp"
#include "dtph/io.hpp"
#include "dtph/linalg.hpp"
#include "dtph/subspace.hpp"
#include "dtph/systems.hpp"
