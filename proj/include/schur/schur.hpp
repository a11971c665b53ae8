#pragma once

// Umbrella header.

#include "schur/boundary.hpp"
#include "schur/colligation.hpp"
#include "schur/darlington.hpp"
#include "schur/json_io.hpp"
#include "schur/linalg.hpp"
#include "schur/recursion.hpp"
#include "schur/resolvent.hpp"
#include "schur/sequence.hpp"
#include "schur/series.hpp"
#include "schur/types.hpp"
#include "schur/weyl.hpp"
