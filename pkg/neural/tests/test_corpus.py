import pytest

from neural_adapter.corpus import (CorpusError, check_mask_fraction,
                                   corpus_vocabulary, mask_fraction,
                                   read_flat_corpus, read_masked_corpus,
                                   value_word_count)
from conftest import make_flat_lines, write_masked_corpus


class TestFlatCorpus:
    def test_reads_keys_and_words(self, flat_corpus):
        lines = read_flat_corpus(flat_corpus)
        assert len(lines) == 64
        assert lines[0].clip_id == "c000"
        assert lines[0].key.count("#") == 1
        assert len(lines[0].words) == 6 * 19

    def test_key_without_hash_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("nokey\tperson magnitude 3.0\n")
        with pytest.raises(CorpusError, match="#"):
            read_flat_corpus(path)

    def test_vocabulary_first_seen_order(self, flat_corpus):
        words = corpus_vocabulary(read_flat_corpus(flat_corpus))
        assert len(words) == len(set(words))
        assert "magnitude" in words and "place" in words


class TestMaskedCorpus:
    def test_reads_targets(self, masked_corpus):
        lines = read_masked_corpus(masked_corpus)
        assert any(line.targets for line in lines)
        for line in lines:
            for pos, original in line.targets:
                assert line.words[pos] == "[MASK]"
                assert original != "[MASK]"

    def test_original_words_reconstruct(self, masked_corpus, flat_corpus):
        flat = {l.key: l.words for l in read_flat_corpus(flat_corpus)}
        for line in read_masked_corpus(masked_corpus):
            assert line.original_words() == flat[line.key]

    def test_target_not_on_mask_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("c0#dog\tdog magnitude 3.0\t2:4.0\n")
        with pytest.raises(CorpusError, match="MASK"):
            read_masked_corpus(path)

    def test_position_out_of_range_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("c0#dog\tdog magnitude [MASK]\t9:4.0\n")
        with pytest.raises(CorpusError, match="range"):
            read_masked_corpus(path)


class TestMaskFraction:
    def test_value_word_count_follows_the_cycle(self):
        assert value_word_count(19) == 10
        assert value_word_count(38) == 20
        assert value_word_count(3) == 1   # object, magnitude, <value>
        assert value_word_count(5) == 2

    def test_fraction_near_rate(self, masked_corpus):
        fraction = mask_fraction(read_masked_corpus(masked_corpus))
        assert 0.15 <= fraction <= 0.25
        assert check_mask_fraction(read_masked_corpus(masked_corpus)) == \
            pytest.approx(fraction)

    def test_out_of_band_rejected(self, tmp_path):
        lines = make_flat_lines(n_lines=20, seed=5)
        path = tmp_path / "overmasked.txt"
        write_masked_corpus(path, lines, rate=0.9, seed=5)
        with pytest.raises(CorpusError, match="sanity band"):
            check_mask_fraction(read_masked_corpus(path))
