import hashlib

import pytest

from app.errors import FunctionFileError
from core.constructions import construction2
from storage.function_file import FunctionFile, parse_function_file, read_function_file, write_function_file

GOOD = "n=4\nfamily=c2\nmodulus=10011\ngenerator=x\ntt={payload}\n"


def test_write_then_read(tmp_path, gf16):
    table = construction2(gf16)
    ff = FunctionFile.from_table(table, gf16, "c2")
    path = write_function_file(ff, tmp_path / "out" / "c2.tt")
    text = path.read_bytes().decode("utf-8")
    assert text == GOOD.format(payload=table.hex())
    assert "\r" not in text
    loaded = read_function_file(path)
    assert loaded.table == table
    assert loaded.field_spec() == gf16
    assert loaded.digest() == ff.digest()
    assert loaded.header() == {"n": "4", "family": "c2", "modulus": "10011", "generator": "x"}


def test_comments_and_blank_lines_are_ignored(gf16):
    text = "# made by hand\n\n" + GOOD.format(payload="0f3c")
    assert parse_function_file(text).table.weight == 8


def test_digest_is_hash_of_input_bytes(tmp_path):
    path = tmp_path / "hand.tt"
    path.write_bytes(("# made by hand\n" + GOOD.format(payload="0f3c")).replace("\n", "\r\n").encode("utf-8"))
    loaded = read_function_file(path)
    assert loaded.digest() == hashlib.sha256(path.read_bytes()).hexdigest()
    assert loaded.canonical_digest() == hashlib.sha256(GOOD.format(payload="0f3c").encode("utf-8")).hexdigest()
    assert loaded.digest() != loaded.canonical_digest()
    assert loaded == parse_function_file(GOOD.format(payload="0f3c"))


def test_bad_hex_digit_reports_offset():
    with pytest.raises(FunctionFileError) as info:
        parse_function_file(GOOD.format(payload="0f3g"))
    assert info.value.line == 5
    assert info.value.offset == 6
    assert info.value.exit_code == 3


def test_wrong_payload_length():
    with pytest.raises(FunctionFileError, match="4 hex digits"):
        parse_function_file(GOOD.format(payload="0f3"))


def test_missing_and_unknown_keys():
    with pytest.raises(FunctionFileError, match="missing 'tt='"):
        parse_function_file("n=4\nfamily=c2\nmodulus=10011\ngenerator=x\n")
    with pytest.raises(FunctionFileError, match="unknown key"):
        parse_function_file("seed=1\n" + GOOD.format(payload="0f3c"))
    with pytest.raises(FunctionFileError, match="duplicate"):
        parse_function_file("n=4\n" + GOOD.format(payload="0f3c"))


def test_bad_modulus():
    with pytest.raises(FunctionFileError) as info:
        parse_function_file(GOOD.format(payload="0f3c").replace("modulus=10011", "modulus=10a11"))
    assert info.value.line == 3
    assert info.value.offset == 10
    with pytest.raises(FunctionFileError, match="unsupported field"):
        parse_function_file(GOOD.format(payload="0f3c").replace("modulus=10011", "modulus=10101"))


def test_unreadable_file(tmp_path):
    with pytest.raises(FunctionFileError, match="cannot read"):
        read_function_file(tmp_path / "missing.tt")
