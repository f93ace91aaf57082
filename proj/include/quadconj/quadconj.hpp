#pragma once

// Umbrella header for the quadconj library.

#include "quadconj/census.hpp"
#include "quadconj/errors.hpp"
#include "quadconj/exactnum.hpp"
#include "quadconj/fp.hpp"
#include "quadconj/moduli.hpp"
#include "quadconj/normalform.hpp"
#include "quadconj/parser.hpp"
#include "quadconj/poly.hpp"
#include "quadconj/quadext.hpp"
#include "quadconj/ratmap.hpp"
#include "quadconj/rational.hpp"
#include "quadconj/selftest.hpp"
