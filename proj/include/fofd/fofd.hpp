#pragma once

#include "core.hpp"
#include "parser.hpp"
#include "evaluator.hpp"
#include "grounder.hpp"
#include "dlreduce.hpp"
#include "smt.hpp"
#include "foid.hpp"
#include "bench.hpp"
