#pragma once

#include "kronmode/problems/gpe.hpp"
#include "kronmode/problems/heat.hpp"
#include "kronmode/problems/pipeflow.hpp"
#include "kronmode/problems/report.hpp"
#include "kronmode/problems/schrodinger.hpp"
