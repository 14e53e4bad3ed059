"""Building interaction trees and watching them one node at a time.

A tree is a computation that either returns a value, takes a silent step,
or asks its environment a question and continues with the answer.  Nothing
runs until you observe it, and one observation does a bounded amount of
work, so even globally infinite trees are safe to hold in your hand.
"""

from itrees import (
    RetO,
    TauO,
    bind,
    burn,
    nat,
    observe,
    ret,
    spin,
    tau,
    trigger,
)
from itrees.samples import echo, input_ev, kill9
from itrees.values import render_value


def show(label, ob):
    if type(ob) is RetO:
        print(f"{label}: returned {render_value(ob.value)}")
    elif type(ob) is TauO:
        print(f"{label}: a silent step")
    else:
        print(f"{label}: asks {ob.event!r}")


# The three constructors.
show("ret 3", observe(ret(nat(3))))
show("tau (ret 3)", observe(tau(ret(nat(3)))))
show("trigger Input", observe(trigger(input_ev())))

# bind queues work without traversing anything; observation resolves it.
doubled = bind(trigger(input_ev()), lambda x: ret(nat(x.payload * 2)))
ob = observe(doubled)
show("input then double", ob)
show("  ...answered 21", observe(ob.k(nat(21))))

# spin never exposes anything but silent steps.
s = spin()
print("spin observations:", [type(observe(burn(i, s))).__name__ for i in range(4)])

# echo forwards inputs to outputs forever.
e = echo()
ob = observe(e)
show("echo", ob)
after_input = observe(ob.k(nat(5)))
show("echo after reading 5", after_input)

# kill9 polls until the environment answers 9.
k = kill9()
ob = observe(k)
show("kill9 round 1 (answer 4)", observe(ob.k(nat(4))))
ob = observe(k)
show("kill9 round 2 (answer 9)", observe(ob.k(nat(9))))
