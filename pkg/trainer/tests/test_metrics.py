import numpy as np
import pytest

from ids_trainer.metrics import MetricsReport, confusion_matrix, evaluate_confusion


def test_binary_hand_case():
    # TP=2 TN=1 FP=1 FN=0 (positive = class 1):
    # accuracy (2+1)/4 = 0.75, F1 = 2*2/(2*2+1+0) = 0.8
    cm = np.array([[1, 1], [0, 2]])
    m = evaluate_confusion(cm)
    assert m.accuracy == pytest.approx(0.75)
    assert m.per_class_f1[1] == pytest.approx(0.8)
    assert m.per_class_accuracy == (0.75, 0.75)


def test_perfect_classifier():
    m = evaluate_confusion(np.array([[10, 0], [0, 5]]))
    assert m.accuracy == 1.0
    assert m.macro_f1 == 1.0
    assert m.per_class_f1 == (1.0, 1.0)


def test_all_wrong():
    m = evaluate_confusion(np.array([[0, 3], [4, 0]]))
    assert m.accuracy == 0.0
    assert m.macro_f1 == 0.0


def test_three_class_hand_case():
    # rows true, cols predicted
    cm = np.array([
        [5, 1, 0],
        [2, 3, 1],
        [0, 0, 4],
    ])
    m = evaluate_confusion(cm)
    assert m.accuracy == pytest.approx(12 / 16)
    # class 0: TP=5 FP=2 FN=1 -> F1 = 10/13
    # class 1: TP=3 FP=1 FN=3 -> F1 = 6/10
    # class 2: TP=4 FP=1 FN=0 -> F1 = 8/9
    assert m.per_class_f1[0] == pytest.approx(10 / 13)
    assert m.per_class_f1[1] == pytest.approx(6 / 10)
    assert m.per_class_f1[2] == pytest.approx(8 / 9)
    assert m.macro_f1 == pytest.approx((10 / 13 + 6 / 10 + 8 / 9) / 3)
    # class 0 one-vs-rest accuracy: TN=8, TP=5, total 16
    assert m.per_class_accuracy[0] == pytest.approx(13 / 16)


def test_absent_class_f1_is_zero():
    # class 1 never occurs and is never predicted: TP=FP=FN=0 -> F1 = 0
    cm = np.array([[7, 0], [0, 0]])
    m = evaluate_confusion(cm)
    assert m.per_class_f1[1] == 0.0
    assert m.accuracy == 1.0


def test_majority_guesser_baseline():
    # predicting the majority class on a 37000/8007 split gives 0.822 accuracy
    cm = np.array([[37000, 0], [8007, 0]])
    m = evaluate_confusion(cm)
    assert m.accuracy == pytest.approx(37000 / 45007)
    assert m.per_class_f1[1] == 0.0


def test_confusion_matrix_builder():
    y_true = np.array([0, 0, 1, 1, 2])
    y_pred = np.array([0, 1, 1, 1, 0])
    cm = confusion_matrix(y_true, y_pred, 3)
    assert cm.tolist() == [[1, 1, 0], [0, 2, 0], [1, 0, 0]]
    assert cm.sum() == 5


def test_report_aggregation():
    seeds = [
        evaluate_confusion(np.array([[8, 2], [1, 9]]), seed=1),
        evaluate_confusion(np.array([[9, 1], [2, 8]]), seed=2),
    ]
    report = MetricsReport(class_names=("Normal", "Attack"), per_seed=tuple(seeds))
    assert report.mean_accuracy == pytest.approx(0.85)
    accs = [m.accuracy for m in seeds]
    assert report.std_accuracy == pytest.approx(np.std(accs))
    rows = report.summary_rows()
    assert len(rows) == 3
    assert rows[-1]["seed"] == "mean±std"
    assert rows[0]["acc_Normal"] == seeds[0].per_class_accuracy[0]
