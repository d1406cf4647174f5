// Post-task questionnaire: grade headline plus the four Likert ratings.
// Validation mirrors the server's ranges so bad submissions are blocked
// before they ever leave the page.

import type { SelfReportBody, TaskResult } from "./api.js";

export interface Answers {
  comprehension: number | null;
  fairness: number | null;
  accuracy: number | null;
  trust: number | null;
  freeText: Record<string, string>;
}

export const SCALES: { name: keyof SelfReportBody & string; min: number; max: number;
                       prompt: string }[] = [
  { name: "comprehension", min: 1, max: 5,
    prompt: "To what extent do you understand how your task has been graded?" },
  { name: "fairness", min: 1, max: 7, prompt: "How fair or unfair is your grade?" },
  { name: "accuracy", min: 1, max: 7, prompt: "How inaccurate or accurate is the grade?" },
  { name: "trust", min: 1, max: 7,
    prompt: "How much do you trust or distrust the platform to fairly grade your task?" },
];

export function emptyAnswers(): Answers {
  return { comprehension: null, fairness: null, accuracy: null, trust: null,
           freeText: {} };
}

export interface Validation {
  ok: boolean;
  missing: string[];
  outOfRange: string[];
}

export function validateAnswers(answers: Answers): Validation {
  const missing: string[] = [];
  const outOfRange: string[] = [];
  for (const scale of SCALES) {
    const value = answers[scale.name as keyof Answers] as number | null;
    if (value === null || value === undefined) {
      missing.push(scale.name);
    } else if (!Number.isInteger(value) || value < scale.min || value > scale.max) {
      outOfRange.push(scale.name);
    }
  }
  return { ok: missing.length === 0 && outOfRange.length === 0, missing, outOfRange };
}

export function toReportBody(answers: Answers): SelfReportBody {
  const validation = validateAnswers(answers);
  if (!validation.ok) {
    throw new Error(`incomplete questionnaire: ${
      [...validation.missing, ...validation.outOfRange].join(", ")}`);
  }
  return {
    comprehension: answers.comprehension as number,
    fairness: answers.fairness as number,
    accuracy: answers.accuracy as number,
    trust: answers.trust as number,
    free_text: answers.freeText,
  };
}

/** Headline shown above the questionnaire, grade first. */
export function gradeHeadline(result: TaskResult): string {
  const sign = result.relevance >= 0 ? "+" : "";
  return `Grade ${result.grade} (completeness ${sign}${result.relevance} points)`;
}
