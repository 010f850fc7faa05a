#pragma once

#include "gammak/errors.hpp"
#include "gammak/precision.hpp"
#include "gammak/rational.hpp"
#include "gammak/polynomial.hpp"
#include "gammak/piecewise.hpp"
#include "gammak/parallel.hpp"
#include "gammak/exactpoly.hpp"
#include "gammak/andreief.hpp"
#include "gammak/quadrature.hpp"
#include "gammak/linalg.hpp"
#include "gammak/hankel.hpp"
#include "gammak/toda.hpp"
#include "gammak/gammaft.hpp"
#include "gammak/aliquot.hpp"
#include "gammak/divisor.hpp"
#include "gammak/report.hpp"
