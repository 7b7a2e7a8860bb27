#pragma once

#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"
#include "faltertide/step_function.hpp"
#include "faltertide/timeset.hpp"
#include "faltertide/traces.hpp"
#include "faltertide/ast.hpp"
#include "faltertide/interp.hpp"
#include "faltertide/syntax.hpp"
#include "faltertide/verdict.hpp"
#include "faltertide/discrete_sem.hpp"
#include "faltertide/continuous_sem.hpp"
#include "faltertide/hol/term.hpp"
#include "faltertide/hol/derivation.hpp"
#include "faltertide/hol/library.hpp"
#include "faltertide/hol/sexp.hpp"
