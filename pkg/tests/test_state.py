"""$.state: the 8 KiB cap, the JSON codec, and alias tracking."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicitem.lang import parse
from magicitem.runtime import (
    STATE_CAP_BYTES,
    ErrorKind,
    FixedHost,
    ScriptError,
    StateCodecError,
    decode_state,
    dispatch,
    encode_state,
    instantiate,
    restore_state,
    snapshot_state,
)
from magicitem.runtime.values import StateDict

HOST = FixedHost()


def install(src):
    return instantiate(parse(src), HOST)


def fire(inst, event="start", args=()):
    return dispatch(inst, event, list(args), HOST)


def test_cap_is_8_kib():
    assert STATE_CAP_BYTES == 8 * 1024


def test_state_persists_across_dispatches():
    inst = install("$.onInteract((p) => {"
                   " $.state.count = ($.state.count || 0) + 1; });")
    for _ in range(5):
        fire(inst, "interact", [None])
    assert inst.state["count"] == 5.0


def test_oversized_write_raises_and_reverts():
    # build a ~16 KiB string, then try to store it
    src = ('$.onStart(() => {'
           ' $.state.keep = "ok";'
           ' let s = "            ";'
           ' for (let i = 0; i < 10; i += 1) { s = s + s; }'
           ' $.state.big = s; });')
    inst = install(src)
    with pytest.raises(ScriptError) as info:
        fire(inst, "start")
    assert info.value.kind is ErrorKind.STATE_OVERFLOW
    # the failed key is absent, earlier writes stand
    assert "big" not in inst.state
    assert inst.state["keep"] == "ok"


def test_aliased_nested_writes_still_hit_the_cap():
    # stash a nested object, pull it out later, grow it through the alias
    src = ('$.onStart(() => { $.state.box = {s: "x"}; });'
           '$.onInteract((p) => {'
           ' let box = $.state.box;'
           ' let s = "            ";'
           ' for (let i = 0; i < 10; i += 1) { s = s + s; }'
           ' box.s = s; });')
    inst = install(src)
    fire(inst, "start")
    with pytest.raises(ScriptError) as info:
        fire(inst, "interact", [None])
    assert info.value.kind is ErrorKind.STATE_OVERFLOW
    assert inst.state["box"]["s"] == "x"


def test_wholesale_state_replacement():
    inst = install('$.onStart(() => { $.state = {a: 1, b: [2, 3]}; });')
    fire(inst, "start")
    assert dict(inst.state) == {"a": 1.0, "b": [2.0, 3.0]}


def test_state_self_assignment_keeps_contents():
    inst = install('$.onStart(() => { $.state.a = 1; $.state = $.state; });')
    fire(inst, "start")
    assert inst.state["a"] == 1.0


def test_state_must_stay_an_object():
    inst = install('$.onStart(() => { $.state = [1, 2]; });')
    with pytest.raises(ScriptError) as info:
        fire(inst, "start")
    assert info.value.kind is ErrorKind.TYPE_MISMATCH


# - codec -


def test_encode_is_compact_json():
    state = StateDict({"n": 3.0, "s": "hi", "flag": True, "nothing": None})
    blob = encode_state(state)
    assert blob == b'{"n":3,"s":"hi","flag":true,"nothing":null}'


def test_integral_floats_encode_as_integers():
    assert encode_state(StateDict({"x": 2.0})) == b'{"x":2}'
    assert encode_state(StateDict({"x": 2.5})) == b'{"x":2.5}'


def test_encode_preserves_insertion_order():
    a = StateDict()
    a["z"] = 1.0
    a["a"] = 2.0
    assert encode_state(a) == b'{"z":1,"a":2}'


def test_non_finite_numbers_do_not_encode():
    with pytest.raises(StateCodecError):
        encode_state(StateDict({"x": float("inf")}))
    with pytest.raises(StateCodecError):
        encode_state(StateDict({"x": float("nan")}))


def test_functions_do_not_encode():
    inst = install('$.onStart(() => { $.state.f = (x) => x; });')
    fire(inst, "start")  # writing is allowed
    with pytest.raises(StateCodecError):
        snapshot_state(inst)  # persisting is not


def test_decode_revives_numbers_as_floats():
    state = decode_state(b'{"n":3,"deep":{"m":[1,2.5]}}')
    assert isinstance(state["n"], float)
    assert state["deep"]["m"] == [1.0, 2.5]


def test_decode_rejects_non_objects():
    with pytest.raises(StateCodecError):
        decode_state(b'[1,2]')
    with pytest.raises(StateCodecError):
        decode_state(b'"just a string"')


def test_decode_rejects_oversized_blobs():
    blob = b'{"s":"' + b"x" * (STATE_CAP_BYTES + 10) + b'"}'
    with pytest.raises(StateCodecError):
        decode_state(blob)


def test_round_trip_preserves_bytes():
    blob = b'{"a":1,"b":{"c":[true,null,"\xc3\xa9"]}}'
    assert encode_state(decode_state(blob)) == blob


json_values = st.recursive(
    st.none()
    | st.booleans()
    | st.floats(min_value=-1e9, max_value=1e9, allow_nan=False)
    | st.text(max_size=20),
    lambda children: st.lists(children, max_size=4)
    | st.dictionaries(st.text(max_size=8), children, max_size=4),
    max_leaves=12,
)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.text(max_size=8), json_values, max_size=6))
def test_codec_round_trips_arbitrary_json_states(data):
    state = decode_state(json.dumps(data).encode())
    blob = encode_state(state)
    assert encode_state(decode_state(blob)) == blob


# - snapshot / restore -


def test_restore_resumes_a_counter():
    src = "$.onInteract((p) => { $.state.count = ($.state.count || 0) + 1; });"
    first = install(src)
    fire(first, "interact", [None])
    fire(first, "interact", [None])
    blob = snapshot_state(first)

    second = install(src)
    restore_state(second, blob)
    fire(second, "interact", [None])
    assert second.state["count"] == 3.0


def test_restore_keeps_enforcing_the_cap():
    src = ('$.onInteract((p) => {'
           ' let s = "            ";'
           ' for (let i = 0; i < 10; i += 1) { s = s + s; }'
           ' $.state.big = s; });')
    inst = install(src)
    restore_state(inst, b'{"seed":1}')
    with pytest.raises(ScriptError) as info:
        fire(inst, "interact", [None])
    assert info.value.kind is ErrorKind.STATE_OVERFLOW
    assert dict(inst.state) == {"seed": 1.0}


def test_snapshot_fits_under_the_cap_when_writes_succeeded():
    # ~6 KiB of data passes the write check and the snapshot stays legal
    src = ('$.onStart(() => {'
           ' let s = "aaaaaaaaaaaaaaaa";'
           ' for (let i = 0; i < 8; i += 1) { s = s + s; }'
           ' $.state.s = s; });')
    inst = install(src)
    fire(inst, "start")
    assert len(snapshot_state(inst)) <= STATE_CAP_BYTES
