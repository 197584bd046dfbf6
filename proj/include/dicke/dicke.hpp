// dicke.hpp — umbrella header

#pragma once

#include "dicke/coherent.hpp"
#include "dicke/eigensolve.hpp"
#include "dicke/errors.hpp"
#include "dicke/husimi.hpp"
#include "dicke/io.hpp"
#include "dicke/model.hpp"
#include "dicke/parallel.hpp"
#include "dicke/quadrature.hpp"
#include "dicke/symmetric_eigen.hpp"
#include "dicke/variational.hpp"
#include "dicke/zeros.hpp"
