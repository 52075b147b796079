import pytest

from durakit.codec.lrc import DEFAULT_DC_ASSIGNMENT, LRC_6_2_2
from durakit.codec.repair import recoverability_report, repair_plan
from durakit.errors import UnrecoverableError
from durakit.placement import Placement
from durakit.probability import ErasureScheme, ReplicationScheme


def rs_6_3_three_per_dc():
    return Placement(ErasureScheme(6, 3), (0, 0, 0, 1, 1, 1, 2, 2, 2))


def lrc_default():
    return Placement(LRC_6_2_2, DEFAULT_DC_ASSIGNMENT)


def rep3_one_per_dc():
    return Placement(ReplicationScheme(3), (0, 1, 2))


class TestWorkedExamples:
    def test_rs_6_3_needs_four_remote_disks(self):
        plan = repair_plan(rs_6_3_three_per_dc(), 0)
        assert len(plan.sources) == 6
        assert plan.local_transfers == 2
        assert plan.remote_transfers == 4

    def test_lrc_single_data_failure_repairs_locally(self):
        plan = repair_plan(lrc_default(), 0)
        assert sorted(plan.sources) == [1, 2, 6]
        assert plan.local_transfers == 3
        assert plan.remote_transfers == 0

    def test_lrc_local_parity_failure_repairs_locally(self):
        plan = repair_plan(lrc_default(), 7)
        assert sorted(plan.sources) == [3, 4, 5]
        assert plan.remote_transfers == 0

    def test_replication_copies_one_replica_from_remote_dc(self):
        plan = repair_plan(rep3_one_per_dc(), 1)
        assert len(plan.sources) == 1
        assert plan.remote_transfers == 1
        assert plan.local_transfers == 0

    def test_cost_narrative_orderings(self):
        rep = repair_plan(rep3_one_per_dc(), 0)
        lrc_single = repair_plan(lrc_default(), 0)
        rs = repair_plan(rs_6_3_three_per_dc(), 0)
        # total bytes moved: lowest replication, intermediate LRC, highest RS
        assert rep.total_transfers <= lrc_single.total_transfers <= rs.total_transfers
        # cross-DC traffic: LRC repairs locally, replication copies one, RS four
        assert lrc_single.remote_transfers <= rep.remote_transfers <= rs.remote_transfers


class TestReplicationRepair:
    def test_prefers_local_replica(self):
        placement = Placement(ReplicationScheme(3), (0, 0, 1))
        plan = repair_plan(placement, 0)
        assert plan.sources == (1,)
        assert plan.local_transfers == 1
        assert plan.remote_transfers == 0

    def test_single_copy_unrepairable(self):
        with pytest.raises(UnrecoverableError):
            repair_plan(Placement(ReplicationScheme(1), (0,)), 0)


class TestRsRepair:
    def test_prefers_local_sources(self):
        plan = repair_plan(rs_6_3_three_per_dc(), 4)
        assert plan.local_transfers == 2
        assert set(plan.sources) >= {3, 5}

    def test_too_many_missing_fragments(self):
        with pytest.raises(UnrecoverableError):
            repair_plan(rs_6_3_three_per_dc(), 0, unavailable=(1, 2, 3, 4))

    def test_extra_unavailable_fragments_skipped(self):
        plan = repair_plan(rs_6_3_three_per_dc(), 0, unavailable=(1, 2))
        assert len(plan.sources) == 6
        assert plan.remote_transfers == 6  # whole local dc is gone

    def test_single_fragment_scheme_unrepairable(self):
        with pytest.raises(UnrecoverableError):
            repair_plan(Placement(ErasureScheme(2, 0), (0, 1)), 0)


class TestLrcRepair:
    def test_global_parity_needs_all_six_data_shards(self):
        plan = repair_plan(lrc_default(), 8)
        assert sorted(plan.sources) == [0, 1, 2, 3, 4, 5]
        assert plan.local_transfers == 0
        assert plan.remote_transfers == 6

    def test_degraded_group_falls_back_to_globals(self):
        # fragment 0 lost and group-mate 1 also unavailable: local XOR repair
        # is impossible, but the globals still determine the data
        plan = repair_plan(lrc_default(), 0, unavailable=(1,))
        assert 1 not in plan.sources
        assert 0 not in plan.sources
        assert plan.remote_transfers >= 1

    def test_degraded_beyond_recovery(self):
        with pytest.raises(UnrecoverableError):
            repair_plan(lrc_default(), 0, unavailable=(1, 2, 6, 8))

    def test_sources_exclude_failed_and_unavailable(self):
        plan = repair_plan(lrc_default(), 3, unavailable=(4,))
        assert 3 not in plan.sources
        assert 4 not in plan.sources


class TestPlanShape:
    def test_dcs_reported_per_source(self):
        plan = repair_plan(rs_6_3_three_per_dc(), 0)
        assert len(plan.source_dcs) == len(plan.sources)
        assert plan.local_transfers + plan.remote_transfers == len(plan.sources)

    def test_bad_failed_index(self):
        with pytest.raises(ValueError):
            repair_plan(rep3_one_per_dc(), 9)


class TestRecoverabilityReportValidation:
    def test_replication_rows(self):
        report = recoverability_report(ReplicationScheme(3), 3)
        assert [r.fraction for r in report.rows] == [1.0, 1.0, 1.0, 0.0]

    def test_max_t_bound(self):
        with pytest.raises(ValueError):
            recoverability_report(ErasureScheme(2, 1), 4)

    def test_unknown_scheme(self):
        with pytest.raises(TypeError):
            recoverability_report("lrc", 2)
