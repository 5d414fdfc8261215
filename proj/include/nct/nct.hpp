#pragma once

#include "nct/errors.hpp"
#include "nct/matrix.hpp"
#include "nct/exact_linalg.hpp"
#include "nct/symreal.hpp"
#include "nct/torus.hpp"
#include "nct/ktheory.hpp"
#include "nct/search.hpp"
#include "nct/classify.hpp"
#include "nct/glq_factor.hpp"
#include "nct/lattice.hpp"
#include "nct/lattice_approx.hpp"
#include "nct/document.hpp"
#include "nct/report.hpp"
