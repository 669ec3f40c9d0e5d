#pragma once

#include "cuspdrift/acceptance.hpp"
#include "cuspdrift/coeff_io.hpp"
#include "cuspdrift/config.hpp"
#include "cuspdrift/eisenstein.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"
#include "cuspdrift/fuchsian.hpp"
#include "cuspdrift/goldfeld.hpp"
#include "cuspdrift/jet.hpp"
#include "cuspdrift/model_io.hpp"
#include "cuspdrift/operators.hpp"
#include "cuspdrift/perturb.hpp"
#include "cuspdrift/phi_n.hpp"
#include "cuspdrift/quadrature.hpp"
#include "cuspdrift/result.hpp"
#include "cuspdrift/specfun.hpp"
#include "cuspdrift/tracker.hpp"
