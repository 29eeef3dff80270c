#pragma once

#include "objsel/cli.hpp"
#include "objsel/data.hpp"
#include "objsel/diagnostics.hpp"
#include "objsel/error.hpp"
#include "objsel/information.hpp"
#include "objsel/io.hpp"
#include "objsel/likelihoods.hpp"
#include "objsel/parallel.hpp"
#include "objsel/random.hpp"
#include "objsel/summation.hpp"
#include "objsel/synthetic.hpp"
#include "objsel/transforms.hpp"
