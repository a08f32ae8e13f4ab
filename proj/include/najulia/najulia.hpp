#pragma once

#include "najulia/dimension.hpp"
#include "najulia/errors.hpp"
#include "najulia/geometry.hpp"
#include "najulia/io.hpp"
#include "najulia/ncifs.hpp"
#include "najulia/parallel.hpp"
#include "najulia/render.hpp"
#include "najulia/seqcore.hpp"
#include "najulia/version.hpp"
