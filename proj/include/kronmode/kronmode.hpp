#pragma once

#include "kronmode/dense.hpp"
#include "kronmode/errors.hpp"
#include "kronmode/fd.hpp"
#include "kronmode/hermite.hpp"
#include "kronmode/kron_operator.hpp"
#include "kronmode/krylov.hpp"
#include "kronmode/parallel.hpp"
#include "kronmode/problems.hpp"
#include "kronmode/scalar.hpp"
#include "kronmode/tensor.hpp"
