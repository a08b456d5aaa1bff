#pragma once

#include "matchkit/error.hpp"
#include "matchkit/group.hpp"
#include "matchkit/matching.hpp"
#include "matchkit/criteria.hpp"
#include "matchkit/relative.hpp"
#include "matchkit/prime_lab.hpp"
#include "matchkit/rational.hpp"
#include "matchkit/linear_core.hpp"
#include "matchkit/linear_matching.hpp"
#include "matchkit/io.hpp"
#include "matchkit/cli.hpp"
