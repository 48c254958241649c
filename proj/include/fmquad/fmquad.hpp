#pragma once

#include "fmquad/error.hpp"
#include "fmquad/gf2.hpp"
#include "fmquad/forms.hpp"
#include "fmquad/arith.hpp"
#include "fmquad/quadfield.hpp"
#include "fmquad/classgroup.hpp"
#include "fmquad/density.hpp"
#include "fmquad/survey.hpp"
#include "fmquad/report.hpp"
