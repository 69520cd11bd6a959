from .exactpoly import RingSpec

# ℤ[x,y,z,u] и его локализация по x (L₀[y,z,u] в обозначениях задачи).
AMBIENT = RingSpec.of("x y z u")
AMBIENT_X = RingSpec.of("x y z u", laurent="x")

# Кольцо, на котором действует автоморфизм Нагаты и разложение через μ.
NAGATA_RING = RingSpec.of("y z u")

# R[t] с v как переменной: дом p_n и функций перехода.
TRANSITION = RingSpec.of("x v t")

# Слой над плоскостью: R[t,ξ], K₀[t,ξ], K₁[t,ξ], M[t,ξ].
FIBER = RingSpec.of("x v t xi")
FIBER_K0 = RingSpec.of("x v t xi", laurent="x")
FIBER_K1 = RingSpec.of("x v t xi", laurent="v")
FIBER_M = RingSpec.of("x v t xi", laurent="x v")

# Специализация x = 0, y = c с обратимой константой слоя c.
FIBER_CONSTANT = RingSpec.of("c z u", laurent="c")
