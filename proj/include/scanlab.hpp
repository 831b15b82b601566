#pragma once

#include "scanlab/common.hpp"
#include "scanlab/deciders.hpp"
#include "scanlab/experiment.hpp"
#include "scanlab/fingerprint.hpp"
#include "scanlab/instance.hpp"
#include "scanlab/nlm.hpp"
#include "scanlab/nlm_random.hpp"
#include "scanlab/nlm_table.hpp"
#include "scanlab/permutation.hpp"
#include "scanlab/primes.hpp"
#include "scanlab/resources.hpp"
#include "scanlab/short_reduction.hpp"
#include "scanlab/skeleton.hpp"
#include "scanlab/skeleton_checks.hpp"
#include "scanlab/tape.hpp"
#include "scanlab/tape_sort.hpp"
#include "scanlab/tm.hpp"
#include "scanlab/tm2lm.hpp"
