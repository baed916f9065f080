#ifndef ALO_ALO_HPP
#define ALO_ALO_HPP

#include "alo/errors.hpp"
#include "alo/basis.hpp"
#include "alo/operator.hpp"
#include "alo/eigen.hpp"
#include "alo/report.hpp"
#include "alo/io.hpp"
#include "alo/models.hpp"
#include "alo/relation.hpp"
#include "alo/chain.hpp"
#include "alo/biorthogonal.hpp"
#include "alo/seed.hpp"
#include "alo/scenarios.hpp"
#include "alo/cli.hpp"

#endif
