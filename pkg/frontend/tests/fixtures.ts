/** Canned API responses, captured verbatim from a live service running the
 * bundled model (HeadTrauma=Wound observed at 120000 ms; the what-if adds
 * LowerExtTrauma=Amputation). Tests treat these as the ground truth the
 * console must mirror without recomputation.
 */

import type { Assessment } from "../src/types.js";
import type { NodeInfo } from "../src/render.js";

export const NODES: NodeInfo[] = [
  { name: "SevereHemorrhage", states: ["Present", "Absent"] },
  { name: "RespiratoryDistress", states: ["Present", "Absent"] },
  { name: "HeadTrauma", states: ["Wound", "Normal"] },
  { name: "TorsoTrauma", states: ["Wound", "Normal"] },
  { name: "LowerExtTrauma", states: ["Wound", "Amputation", "Normal"] },
  { name: "UpperExtTrauma", states: ["Wound", "Amputation", "Normal"] },
  { name: "OcularAlertness", states: ["Open", "Closed", "NT"] },
  { name: "VerbalAlertness", states: ["Normal", "Abnormal", "Absent", "NT"] },
  { name: "MotorAlertness", states: ["Normal", "Abnormal", "Absent", "NT"] },
];

export const COMMITTED: Assessment = {
  casualty_id: "c01",
  report_timestamp_ms: 120000,
  model_version: "1.0.0",
  vitals: {
    SevereHemorrhage: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.32700313000000003, 0.67299687],
    },
    RespiratoryDistress: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.221, 0.779],
    },
    HeadTrauma: { state: "Wound", provenance: "Observed", distribution: [1.0, 0.0] },
    TorsoTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.30000000000000004, 0.7],
    },
    LowerExtTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.25, 0.10000000000000003, 0.65],
    },
    UpperExtTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.25, 0.09999999999999998, 0.65],
    },
    OcularAlertness: {
      state: "Closed",
      provenance: "Inferred",
      distribution: [0.25, 0.7000000000000001, 0.05],
    },
    VerbalAlertness: {
      state: "Abnormal",
      provenance: "Inferred",
      distribution: [0.23459937399999997, 0.4836498435000001, 0.2317507825, 0.05],
    },
    MotorAlertness: {
      state: "Abnormal",
      provenance: "Inferred",
      distribution: [0.2682492175, 0.4336498434999998, 0.24810093899999983, 0.04999999999999999],
    },
  },
};

export const HYPOTHETICAL: Assessment = {
  casualty_id: "c01",
  report_timestamp_ms: 120000,
  model_version: "1.0.0",
  vitals: {
    SevereHemorrhage: {
      state: "Present",
      provenance: "Inferred",
      distribution: [0.92174455, 0.07825544999999999],
    },
    RespiratoryDistress: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.22099999999999997, 0.779],
    },
    HeadTrauma: { state: "Wound", provenance: "Observed", distribution: [1.0, 0.0] },
    TorsoTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.3, 0.7000000000000001],
    },
    LowerExtTrauma: {
      state: "Amputation",
      provenance: "Observed",
      distribution: [0.0, 1.0, 0.0],
    },
    UpperExtTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.24999999999999994, 0.09999999999999998, 0.65],
    },
    OcularAlertness: {
      state: "Closed",
      provenance: "Inferred",
      distribution: [0.25000000000000006, 0.6999999999999998, 0.049999999999999996],
    },
    VerbalAlertness: {
      state: "Abnormal",
      provenance: "Inferred",
      distribution: [0.11565108999999998, 0.45391277249999984, 0.3804361375000001, 0.05000000000000004],
    },
    MotorAlertness: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.11956386250000009, 0.4039127725, 0.42652336500000004, 0.049999999999999975],
    },
  },
};

/** All-priors report: a blank-slate what-if with an empty overlay. */
export const PRIORS: Assessment = {
  casualty_id: "whatif",
  report_timestamp_ms: 0,
  model_version: "1.0.0",
  vitals: {
    SevereHemorrhage: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.32700313000000003, 0.67299687],
    },
    RespiratoryDistress: {
      state: "Absent",
      provenance: "Inferred",
      distribution: [0.221, 0.7789999999999999],
    },
    HeadTrauma: { state: "Normal", provenance: "Inferred", distribution: [0.3, 0.7] },
    TorsoTrauma: { state: "Normal", provenance: "Inferred", distribution: [0.3, 0.7] },
    LowerExtTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.24999999999999997, 0.10000000000000002, 0.65],
    },
    UpperExtTrauma: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.25, 0.09999999999999998, 0.6499999999999998],
    },
    OcularAlertness: {
      state: "Open",
      provenance: "Inferred",
      distribution: [0.6699999999999999, 0.28, 0.050000000000000024],
    },
    VerbalAlertness: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.5273738262500001, 0.2837656103499999, 0.1388605634, 0.05],
    },
    MotorAlertness: {
      state: "Normal",
      provenance: "Inferred",
      distribution: [0.5354456259299999, 0.2754997418099999, 0.14376561034999993, 0.045289021910000095],
    },
  },
};
