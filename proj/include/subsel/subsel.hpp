#pragma once

#include "subsel/bounds.hpp"
#include "subsel/error.hpp"
#include "subsel/generate.hpp"
#include "subsel/io.hpp"
#include "subsel/linalg.hpp"
#include "subsel/oracle.hpp"
#include "subsel/problem.hpp"
#include "subsel/report.hpp"
#include "subsel/selection.hpp"
#include "subsel/tolerances.hpp"
