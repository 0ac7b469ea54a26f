#pragma once

// Umbrella header.

#include "hbl/errors.hpp"
#include "hbl/rational.hpp"
#include "hbl/matrix.hpp"
#include "hbl/linalg.hpp"
#include "hbl/datum.hpp"
#include "hbl/enumerate.hpp"
#include "hbl/polytope.hpp"
#include "hbl/decision.hpp"
#include "hbl/oracle.hpp"
#include "hbl/diophantine.hpp"
