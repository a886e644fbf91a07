"""Shared generators for the test suite: random exact matrices, random
well-typed terms, per-rule rewrite instances, and the enumeration of all
strict normal-form objects below a dimension bound."""

from catqm import kernel as k
from catqm.models import model_over, standard_signature
from catqm.scalars import HALF_SQRT2, I_UNIT, ONE, QiSqrt2

Q = k.GenObj("Q")

# small exact alphabet: counterexamples stay readable and equality exact
ALPHABET = (QiSqrt2(0), ONE, -ONE, I_UNIT, -I_UNIT, HALF_SQRT2, -HALF_SQRT2)


def rand_scalar(rng):
    return ALPHABET[rng.randrange(len(ALPHABET))]


def rand_object(rng, max_factors=2):
    atoms = [k.UNIT, Q, k.Dual(Q), k.GenObj("G3")]
    picks = [atoms[rng.randrange(len(atoms))]
             for _ in range(rng.randint(1, max_factors))]
    if len(picks) == 1:
        return picks[0]
    if rng.random() < 0.5:
        return k.tensor_of(picks)
    return k.biprod_of(picks)


class GenFactory:
    """Accumulates random morphism generators over the standard objects
    plus a three-dimensional one, then builds models on demand."""

    def __init__(self, rng):
        self.rng = rng
        self.objects = {"G3": 3}
        self.morphisms = {}
        self._count = 0

    def fresh(self, dom, cod):
        dims = dict(standard_signature().objects)
        dims.update(self.objects)
        rows = k.object_dim(dims, k.strictify(cod))
        cols = k.object_dim(dims, k.strictify(dom))
        entries = tuple(rand_scalar(self.rng) for _ in range(rows * cols))
        self._count += 1
        name = f"g{self._count}"
        self.morphisms[name] = k.MorGen(dom, cod, entries)
        return k.GenMor(name)

    def signature(self):
        return standard_signature().extended(self.objects, self.morphisms)

    def model(self, model_name):
        return model_over(model_name, self.signature())


# ---------------------------------------------------------------------------
# rewrite-rule instances
# ---------------------------------------------------------------------------


def rand_object_nonunit(rng, max_factors=2):
    """A random object whose normal form is not the tensor unit (identity
    factors on the unit are erased by canonicalisation, so redexes built
    over them would not survive to be matched)."""
    while True:
        a = rand_object(rng, max_factors)
        if k.strictify(a) != k.UNIT:
            return a


def rule_instance(rule_name, rng):
    """A random well-typed redex for the named rule (at the root)."""
    fac = GenFactory(rng)
    a = rand_object_nonunit(rng)
    b = rand_object_nonunit(rng)
    c = rand_object_nonunit(rng)
    d = rand_object_nonunit(rng)

    if rule_name == "absorption":
        f = fac.fresh(a, b)
        g = fac.fresh(b, c)
        lhs = k.Compose(k.TensorM(k.Id(k.Dual(a)), g), k.Name(f))
    elif rule_name == "backward-absorption":
        f = fac.fresh(a, b)
        g = fac.fresh(c, a)
        lhs = k.Compose(k.TensorM(k.DualM(g), k.Id(b)), k.Name(f))
    elif rule_name == "coname-absorption":
        f = fac.fresh(a, b)
        h = fac.fresh(c, a)
        lhs = k.Compose(k.Coname(f), k.TensorM(h, k.Id(k.Dual(b))))
    elif rule_name == "coname-backward-absorption":
        f = fac.fresh(a, b)
        g = fac.fresh(b, d)
        lhs = k.Compose(k.Coname(f), k.TensorM(k.Id(a), k.DualM(g)))
    elif rule_name == "compositionality":
        f = fac.fresh(a, b)
        g = fac.fresh(b, c)
        lhs = k.Compose(k.TensorM(k.Coname(f), k.Id(c)),
                        k.TensorM(k.Id(a), k.Name(g)))
    elif rule_name == "compositional-cut":
        f = fac.fresh(a, b)
        g = fac.fresh(b, c)
        h = fac.fresh(c, d)
        lhs = k.Compose(
            k.TensorM(k.Id(k.Dual(a)), k.TensorM(k.Coname(g), k.Id(d))),
            k.TensorM(k.Name(f), k.Name(h)))
    elif rule_name == "dagger-involution":
        lhs = k.Dagger(k.Dagger(fac.fresh(a, b)))
    elif rule_name == "dagger-antihomomorphism":
        lhs = k.Dagger(k.Compose(fac.fresh(b, c), fac.fresh(a, b)))
    elif rule_name == "ketbra-idempotence":
        psi = fac.fresh(k.UNIT, a)
        lhs = k.Compose(psi, k.Compose(k.Dagger(psi),
                                       k.Compose(psi, k.Dagger(psi))))
    elif rule_name == "name-of-identity":
        lhs = k.Name(k.Id(a))
    elif rule_name == "coname-of-identity":
        lhs = k.Coname(k.Id(a))
    elif rule_name == "structural-iso-erasure":
        isos = [k.Lambda(a), k.LambdaInv(a), k.Rho(a), k.RhoInv(a),
                k.Alpha(a, b, c), k.AlphaInv(a, b, c), k.UnitDual(),
                k.UnitDualInv(), k.BiprodDual(a, b), k.BiprodDualInv(a, b),
                k.DoubleDual(a), k.DoubleDualInv(a)]
        lhs = isos[rng.randrange(len(isos))]
    elif rule_name == "composition-unit":
        f = fac.fresh(a, b)
        lhs = (k.Compose(k.Id(b), f) if rng.random() < 0.5
               else k.Compose(f, k.Id(a)))
    else:
        raise KeyError(f"no instance builder for rule {rule_name!r}")
    return lhs, fac


# ---------------------------------------------------------------------------
# random well-typed terms (for termination and round-trip tests)
# ---------------------------------------------------------------------------


def random_typed_term(rng, steps=12):
    """Grow a pool of well-typed terms by random combination; return the
    last one grown (depth roughly ``steps``)."""
    fac = GenFactory(rng)
    pool = []

    def seed():
        a = rand_object(rng)
        b = rand_object(rng)
        choice = rng.randrange(5)
        if choice == 0:
            return k.Id(a)
        if choice == 1:
            return fac.fresh(a, b)
        if choice == 2:
            return k.Eta(a)
        if choice == 3:
            return k.Epsilon(a)
        return k.Sigma(a, b)

    for _ in range(3):
        pool.append(seed())
    sig = fac.signature()
    for _ in range(steps):
        t = pool[rng.randrange(len(pool))]
        jt = k.typecheck(t, sig)
        choice = rng.randrange(8)
        if choice == 0:
            t2 = pool[rng.randrange(len(pool))]
            new = k.TensorM(t, t2)
        elif choice == 1:
            new = k.Dagger(t)
        elif choice == 2:
            new = k.DualM(t)
        elif choice == 3:
            new = k.Name(t)
        elif choice == 4:
            new = k.ScalarMul(rand_scalar(rng), t)
        elif choice == 5:
            new = k.Compose(fac.fresh(jt.cod, rand_object(rng)), t)
            sig = fac.signature()
        elif choice == 6:
            new = k.Pair((t, t))
        else:
            new = k.Plus(t, t)
        pool.append(new)
    return pool[-1], fac


# ---------------------------------------------------------------------------
# strict normal forms of bounded dimension
# ---------------------------------------------------------------------------


def nf_objects(max_dim):
    """Every strict normal form over {I, Q, dual, tensor, biproduct} whose
    dimension is at most ``max_dim`` (duals only on the generator)."""
    atoms = {1: [k.UNIT], 2: [Q, k.Dual(Q)]}
    tensors_memo = {}
    biprods_memo = {}

    def nontensor(d):
        return atoms.get(d, []) + biprods(d)

    def nonbiprod(d):
        return atoms.get(d, []) + tensors(d)

    def tensors(d):
        if d in tensors_memo:
            return tensors_memo[d]
        results = []

        def go(remaining, acc):
            if remaining == 1:
                if len(acc) >= 2:
                    results.append(k.tensor_of(acc))
                return
            for d1 in range(2, remaining + 1):
                if remaining % d1:
                    continue
                if not acc and d1 == d:
                    continue
                for f in nontensor(d1):
                    acc.append(f)
                    go(remaining // d1, acc)
                    acc.pop()

        go(d, [])
        tensors_memo[d] = results
        return results

    def biprods(d):
        if d in biprods_memo:
            return biprods_memo[d]
        results = []

        def go(remaining, acc):
            if remaining == 0:
                if len(acc) >= 2:
                    results.append(k.biprod_of(acc))
                return
            for d1 in range(1, remaining + 1):
                if not acc and d1 == d:
                    continue
                for s in nonbiprod(d1):
                    acc.append(s)
                    go(remaining - d1, acc)
                    acc.pop()

        go(d, [])
        biprods_memo[d] = results
        return results

    out = []
    for d in range(1, max_dim + 1):
        out.extend(atoms.get(d, []))
        out.extend(tensors(d))
        out.extend(biprods(d))
    return out
