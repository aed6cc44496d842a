#pragma once

#include "besov/calculus.hpp"
#include "besov/core.hpp"
#include "besov/disc_functions.hpp"
#include "besov/function_expr.hpp"
#include "besov/kt_experiments.hpp"
#include "besov/matrix_io.hpp"
#include "besov/operators.hpp"
#include "besov/parse.hpp"
#include "besov/quadrature.hpp"
#include "besov/series.hpp"
