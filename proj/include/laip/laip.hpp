#pragma once

#include "laip/decompose.hpp"
#include "laip/errors.hpp"
#include "laip/instance.hpp"
#include "laip/lp.hpp"
#include "laip/oracle.hpp"
#include "laip/pipeline.hpp"
#include "laip/poly.hpp"
#include "laip/problems.hpp"
#include "laip/rational.hpp"
#include "laip/relax.hpp"
#include "laip/report_io.hpp"
#include "laip/rounding.hpp"
#include "laip/simplex.hpp"
