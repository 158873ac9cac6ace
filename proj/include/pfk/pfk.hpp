#pragma once

// Umbrella header.

#include "pfk/coeff.hpp"
#include "pfk/linalg.hpp"
#include "pfk/poly.hpp"
#include "pfk/exterior.hpp"
#include "pfk/pfaffian.hpp"
#include "pfk/complex.hpp"
#include "pfk/complex_json.hpp"
#include "pfk/slice.hpp"
#include "pfk/parallel.hpp"
#include "pfk/builders.hpp"
#include "pfk/homology.hpp"
#include "pfk/hilbert.hpp"
#include "pfk/report.hpp"
#include "pfk/checks.hpp"
