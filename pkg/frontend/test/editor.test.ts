import { describe, expect, it } from "vitest";

import { MeaningEditor } from "../src/editor.js";
import { parseMeaningString } from "../src/meaning.js";

describe("meaning editor", () => {
  it("labels slots from the parse_str components", () => {
    const editor = new MeaningEditor("NN|NN|VV");
    expect(editor.slotLabels()).toEqual(["0:NN", "1:NN", "2:VV"]);
  });

  it("builds the reviewer's meaning string in order", () => {
    const editor = new MeaningEditor("NN|NN|VV");
    expect(editor.addRelation("nsubj", 1, 2)).toBeNull();
    expect(editor.addRelation("dobj", 2, 0)).toBeNull();
    expect(editor.buildMeaning()).toBe("nsubj:1:2,dobj:2:0");
  });

  it("refuses out-of-range and self-referential selections", () => {
    const editor = new MeaningEditor("NN|VV");
    expect(editor.addRelation("nsubj", 0, 2)).toMatch(/out of range/);
    expect(editor.addRelation("nsubj", 1, 1)).toMatch(/differ/);
    expect(editor.specs).toEqual([]);
    expect(editor.isValid()).toBe(false);
    expect(() => editor.buildMeaning()).toThrow();
  });

  it("previews relations against an evidence token sequence", () => {
    const editor = new MeaningEditor("NN|NN|VV");
    editor.addRelation("nsubj", 0, 2);
    expect(editor.preview(["machine", "learning", "wins"])).toEqual([
      { relType: "nsubj", head: "machine", tail: "wins" },
    ]);
  });

  it("emits only strings that round-trip through the parser", () => {
    const editor = new MeaningEditor("NN|VV|NN|AD");
    editor.addRelation("nsubj", 0, 1);
    editor.addRelation("dobj", 1, 2);
    const meaning = editor.buildMeaning();
    expect(parseMeaningString(meaning)).toHaveLength(2);
  });

  it("supports removing a selected relation", () => {
    const editor = new MeaningEditor("NN|VV");
    editor.addRelation("nsubj", 0, 1);
    editor.removeRelation(0);
    expect(editor.isValid()).toBe(false);
  });
});
