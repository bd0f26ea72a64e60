#pragma once

#include "lcx/rational.hpp"
#include "lcx/graph.hpp"
#include "lcx/demand.hpp"
#include "lcx/reduction.hpp"
#include "lcx/lp.hpp"
#include "lcx/concurrent_flow.hpp"
#include "lcx/rounding.hpp"
#include "lcx/exponential.hpp"
#include "lcx/decomposition.hpp"
#include "lcx/cover.hpp"
#include "lcx/shortcut.hpp"
#include "lcx/random.hpp"
#include "lcx/io.hpp"
