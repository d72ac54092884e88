#pragma once

#include "uniprice/clock.hpp"
#include "uniprice/dynamics.hpp"
#include "uniprice/error.hpp"
#include "uniprice/model.hpp"
#include "uniprice/oracle.hpp"
#include "uniprice/procurement.hpp"
#include "uniprice/rational.hpp"
#include "uniprice/solver.hpp"
