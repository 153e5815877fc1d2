#pragma once

#include "hypic/rational.hpp"
#include "hypic/linalg.hpp"
#include "hypic/polynomial.hpp"
#include "hypic/graded.hpp"
#include "hypic/complex.hpp"
#include "hypic/arrangement.hpp"
#include "hypic/matroid.hpp"
#include "hypic/sheaf.hpp"
#include "hypic/invariants.hpp"
#include "hypic/gmes.hpp"
#include "hypic/io.hpp"
#include "hypic/report.hpp"
#include "hypic/verify.hpp"
