#pragma once

#include "dlc/syntax.hpp"
#include "dlc/subst.hpp"
#include "dlc/stack.hpp"
#include "dlc/printer.hpp"
#include "dlc/parser.hpp"
#include "dlc/typecheck.hpp"
#include "dlc/reduction.hpp"
#include "dlc/normalizer.hpp"
#include "dlc/herbrand.hpp"
#include "dlc/simulation.hpp"
#include "dlc/parallel.hpp"
#include "dlc/corpus.hpp"
