// Generated by tools/embed_assets.py from assets/ -- do not edit by hand.
#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace proeval::asset_data {

inline constexpr std::string_view prompt_completion_checker =
    R"PROEVAL_ASSET(<Task>
You will read a conversation between an assistant and a user. Decide whether the assistant has already achieved the target below in this conversation, meaning the user has received or accepted the intended outcome and no further guidance is needed.
</Task>
<Target>
target: {target}
sub-targets: {sub_target}
</Target>
<Conversation>
{conversation}
</Conversation>
<Format>
Answer with exactly one word: yes or no.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_density_count =
    R"PROEVAL_ASSET(<Task>
You need to analyze the sub-targets that appear in the messages and count the number of targets that appear.
</Task>
<Sub-targets>
{sub_targets}
</Sub-targets>
<Message>
message: {message}
</Message>
<Rule>
Return only in JSON format: {{"count": (the number of sub-targets appeared in the message)}}
</Rule>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_environment_gen =
    R"PROEVAL_ASSET(<Task>
You are tasked with generating realistic scenarios that needs AI to proactively initaite conversation to help user. 
</Task>
<Description>
{description}
</Description>
<Rule>
1. Try to generate diverse details in user information (e.g., job, age, hobbies in daily lives) and trigger factor about the scene. 
2. Just return one environment of JSON format, the format is {{"user_information":"", "trigger_factor":""}}.
</Rule>
<Example>
Here are some examples of the environment generation:
{Examples}
</Example>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_final_check =
    R"PROEVAL_ASSET(<Task>
You will receive an environment. The environment refers to the background and reasons for the target, including user information, trigger factors. User information consists of the background details exhibited by the user in the conversation. trigger factor is the cause that motivates the assistant's to talk. The target should be the action that the assistant will proactively take to achieve a specific goal. The sub-targets decompose target, showing the process of the conversation AI guide the target to the user. You need to consider whether this proactive dialogue target is the **best target** for the current scenario. Therefore, you first need to think about whether there are other targets in the current environment that would trigger proactive dialogue, and compare them with the current target. If the current target is the best target, return True, otherwise return False.
In this case, {description}
</Task>

<Input>
environment: {environment}
target: {target}
sub_targets: {sub_targets}
</Input>

<Format>
Just return a JSON with the format {{"reason": "", "judge": "True"/"False"}}. The "judge" field should be true if the target is the best target in the environment, and false if it is not the best target. The "reason" field should explain the reasoning process behind the judgment in 2-3 sentences.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_guidance_assistant =
    R"PROEVAL_ASSET(<Task>
You are a proactive AI assistant chatting online with a user. Based on the environment below, you start the conversation yourself and guide the user through it. Speak naturally, one short chat message at a time, and respond to what the user says while steering the conversation forward.
</Task>
<Environment>
user information: {user_information}
trigger factor: {trigger_factor}
</Environment>
{target_block}<Format>
Return only your next chat message as plain text, with no quotes, labels, or metadata.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_judge_guidance =
    R"PROEVAL_ASSET(<Task>
You need to evaluate the guidance ability in the conversation. "Guidance" refers to the model's capacity to lead the conversation, gradually engage the user in the dialogue, and guide the user to reach the conversation's target. You are required to assign a score from 1 to 10 to assess the conversation, with a higher score indicating better guidance ability by the assistant.
<Task>

<Input>
You received user information: {user_information}
You received trigger factor: {trigger_factor}
You received target: {target}
You received sub-target: {sub_target}
You received conversation: {conversation}
</Input>

<Guideline>
You should evaluate the conversation based on the following criteria, and give a int score between 1 and 10.
If there are some criteria not met, you should deduct 2-4 (extremely bad) points each criteria.
1. Multi-turn Interaction and Goal Progression (Effectiveness): You should check the target completion and the turns number. The assistant should initiate the conversation to spark user interest and engage in multiple rounds of interaction, gradually achieving sub-goals to reach the overall target. Deduct points if the assistant fails to achieve the goal, delivers all information in a single message, or limits the interaction to one turn.
2. Personalized Guidance (Personalization): You should check whether the assistant's guidance is personalized. The assistant's guidance should be tailored to the user's specific information and context, rather than offering generic recommendations.
3. Proactive Tone (Tone): You should check the assistant's tone. The assistant should adopt an active tone to initiate and drive the conversation, avoiding passive phrases (e.g., "It sounds like...").
4. Concise and Engaging Messages (Engagement): You should check each assistant's message length. Messages should suit the conversational context, be clear and concise to avoid overwhelming the user (each message should no more than 2 sentences or 50 words).
5. Natural Online Messaging Format (Naturalness): You should check the assistant's message format. Messages should resemble typical online communication, avoiding any leakage of metadata (e.g., "target", "sub-target", "turn n", etc.).
If there are any other issues can be improved, you can also deduct realted points.
</Guideline>

<Format>
Just return a Json {{"thought":"(your compute process within 100 words)", "score": (score between 1 and 10)}}
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_judge_planning =
    R"PROEVAL_ASSET(<Task>
You are a helpful assistant. You will receive an envioronment, which includes user information and trigger factor. User information consists of the background details exhibited by the user. trigger factor is the cause that motivates the assistant's to proactively initiate conversation.  The target should be the action that the assistant will proactively take to achieve a specific goal. The sub-targets decompose target, showing the process of the conversation AI guide the target to the user. You need to evaluate the quality of the generated target, based on the reference target. Your generated score to the generated target should be 1-10. The higher the score, the better the target and sub-targets.
task description: {DOMAIN_DESCRIPTIONS[domain_name]}
</Task>

<Rule>
1. IMPORTANT: You should pay attention to the task description and the reference target to give your score.
2. If you think the generated target is better than the reference target, return 10. 
3. If you think the generated target is worse than the reference target, return 1-9.
4. You should analyze the difference in action, specific entities, limited conditions between the generated target and the reference target, and give a reason for your score. And the reason should be 3-4 sentences.
</Rule>

<Received Information>
environment:{environment}
</Received Information>

<Generation>
reference target: {reference}
generated target: {generation}
</Generation>

<Example>
{examples}
</Example>

<Format>
Just return a JSON Format as {{"reason":"(your compare process)", "score":(your score)}}
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_noise_trigger_factor =
    R"PROEVAL_ASSET(<Task>
You are an AI assistant tasked with adding contextual "noise" to an 'Input' text to make the original key information less conspicuous. Your goal is to embed the original sentences within a larger, more detailed context while preserving the target content.
</Task>

<Guidelines>
1. Add Relevant Noise: Insert plausible, related but non-essential details such as other activities, experiences, preferences, system logs, or conversational topics that fit the context. It may attract attention but actually not important.
2. Embed Original Content: The original sentences from the 'Input' must be preserved and naturally integrated within the 'Output', not isolated at the beginning or end.
3. Create a Coherent Context: The final 'Output' should read as a single, coherent piece of text, making the original key information less conspicuous and more integrated.
4. For each output, the amount of added noise compared to the input should be about 3-4 sentences.
5. Maintain Target Relevance: The rewritten output should still reflect the target content and include its important entities, but make it harder to immediately identify the core purpose.
</Guidelines>

<Example>
Here are some examples:
{example}
</Example>

<Format>
Just return a string starting with "Output: ".
</Format>

Now, rewrite the following sentence from input to output: 
Input: {trigger_factor}
Target: {target}
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_noise_user_information =
    R"PROEVAL_ASSET(<Task>
You are an AI assistant tasked with adding contextual "noise" to an 'Input' text. Your goal is to make the original information appear as part of a larger, more detailed log or description.
</Task>

<Guidelines>
1. Add Relevant Noise: The "noise" should consist of plausible, related but non-essential details. It may attract attention but actually not important. This could be other user activities, hobbies, system logs, background processes, or past conversational remarks, depending on the context of the Input.
2. Embed the Original Content: The original sentences from the 'Input' must be preserved and embedded in the middle of 'Output'. They should not at the beginning or end, but rather interspersed naturally with the added noise.
3. Create a Coherent Context: The final 'Output' should read as a single, coherent piece of text, making the original key information less conspicuous and more integrated.
4. For each output, the amount of added noise compared to the input should be about 3-4 sentences.
</Guidelines>

<Example>
Here are some examples:
{example}
</Example>

<Format>
Just return a string starting with "Output: ".
</Format>

Now, rewrite the following sentence from input to output: 
Input: {user_information}
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_obfuscate_trigger_factor =
    R"PROEVAL_ASSET(<Task>
You are an AI assistant tasked with rewriting a trigger factor description. I will provide you with an "Input" style description, and your job is to transform it into an "Output" style based on the following guidelines.
</Task>
<Rules>
1. Transform Abstract to Concrete: Convert general, abstract, or simple descriptions into specific, detailed, and observable scenarios or actions.
2. Enrich with Plausible Details: Enhance the input by adding reasonable and relevant specifics such as times, quantities, names of tools/apps, locations, or sequential steps to make the output more realistic and comprehensive.
3. Maintain Objectivity: Describe external, observable events and actions. Avoid including internal states like emotions, thoughts, psychological speculations (e.g., 'feel', 'consider', 'notice', 'think'), or summary judgments (e.g., 'good', 'successful'), and some connective words (e.g., however, but, finally, etc.), and some adjectives (e.g., good, bad, successful, unsuccessful, problem, issues, etc.).
4. Preserve Core Intent: The rewritten output must still reflect the original `Target` and include its key entities.
5. Domain-Specific Rule: {domain_rule}
</Rules>
<Examples>
{example}
</Examples>
<Format>
Just return a string starting with "Output: ".
</Format>
Now, rewrite the following sentence from Input to Output:
Input: {trigger_factor}
Target: {target}
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_obfuscate_user_information =
    R"PROEVAL_ASSET(<Task>
You are a writing assistant tasked with rewriting a general input description into a specific and detailed output. You will transform abstract summaries into concrete, observable scenarios. Follow all rules and examples precisely.
</Task>
<Rules>
General Rules (Apply to all domains):
1. Convert Abstract to Concrete: Transform general descriptions (e.g., habits, preferences, psychological states) into specific, observable actions and detailed scenarios.
2. Exclude Internal States: Do not include descriptions of internal thoughts, feelings, psychological speculations, or personal evaluations. Instead, describe the external behaviors that might suggest these states.
3. The rewrite output should not include any subjective words (e.g., try, however, notice, etc.). It should use objective words to describe the user information.
4. Add Plausible Details: Enhance the input with reasonable and relevant specifics (e.g., times, locations, object names, specific actions) to make the output realistic and believable.
5. Specific Rule for this Domain: {Domain_Rule}
</Rules>
<Examples>
{Examples}
</Examples>
<Format>
Just return a string starting with "Output: ".
</Format>
Now, rewrite the following sentence from input to Output:
Input: {user_information}
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_similarity_judge =
    R"PROEVAL_ASSET(<Task>
You will receive a reference target and a predicted target for a proactive dialogue. Both describe an action the assistant plans to take. Decide whether the predicted target conveys a similar meaning to the reference target, i.e. the same intended action toward the same outcome, even if phrased differently.
</Task>
<Input>
reference target: {reference}
predicted target: {prediction}
</Input>
<Format>
Just return a JSON with the format {{"reason": "", "judge": "yes"/"no"}}. The "judge" field should be yes if the predicted target conveys a similar meaning to the reference target, and no otherwise. The "reason" field should explain the judgment in 1-2 sentences.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_target_ensemble =
    R"PROEVAL_ASSET(<Task>
You are a dialogue expert who is good at proactive dialgue. You will receive an environment, where the assistant need to initiate and guide the user to achieve a specific goals proactively.
You will received some targets related to the environment, but you need to analyze their each advantages in 1-2 sentencesand synthesize them into a best target.
The target should be the action which the assistant proactively guides the conversation to achieve a specific goal. The sub-targets decompose target, showing the process of the conversation AI guide the target to the user.
</Task>
<Description>
{description}
</Description>
<Rule>
For each targets and sub-targets, you should consider three aspects:
1. The alignment to the environment: They should be logical and no misinformation.
2. The completeness of the sub-targets: Each sub-target should be a complete and most basic part of the target. They should fully decompose the target.
3. The interactivity and user-friendly of the sub-targets: They should make user feel comfortable and acceptable for the proactive messages from assistant, and inspire user's interaction attention and interest.
4. The redundancy of the sub-targets: They should actionable and not import too much information to disturb user.
You need to analyze each target's advantages and disadvantages from the above four aspects in order, using 1-2 sentences for each, then comprehensively consider and synthesize them into the best target and sub-targets.
5. The target should not be too vegue, general or short. And the target should be specific enough but less than 10 words. And each sub-target should be concise and less than 10 words.
The number of sub-targets should in 2 - 4.
</Rule>
<Input>
The environment: {environment}
The targets:
{targets}
</Input>
<Format>
Just return Your analyze process, target, and sub-targets as **JSON** Format. The format is {{"analyze_process":"<Your thought process of analyze and synthesize>","Target":"","sub_target":[""]}}.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_target_gen =
    R"PROEVAL_ASSET(<Task>
Your task is to generate target and sub_target based on the provided environment. The environment refers to the background and reasons for the target, including user information, trigger factors. User information consists of the background details exhibited by the user in the conversation. trigger factor is the cause that motivates the assistant's to talk. The target should be the action that the assistant will proactively take to achieve a specific goal. The sub-targets decompose target, showing the process of the conversation AI guide the target to the user.
</Task>
<Description>
{description}
</Description>
<Rule>
1. The target should be less than 10 words.
2. Each sub_target should be concise and less than 10 words.
3. Consider the process of dialgue, the number of sub_targets should in 2 - 4. 
</Rule>
<Example>
Here are some examples of target and sub_targets for the refered environment.
{example}
</Example>
<Environment>
{environment}
</Environment>
<Format>
Just return Target, and sub-targets as **JSON** Format. The format is {{"Target":"","sub-target":[""]}}.
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_topic_expand =
    R"PROEVAL_ASSET(<Task>
Generate {n} sub-topics for the parent topic ({topic}). Each sub-topic should represent an area where an AI assistant needs to proactively initiate a dialogue to guide a user towards a specific target.
</Task>

<Rule>
1. Each sub-topic must be a noun or a noun phrase.
2. Each sub-topic must need proactive dialogue from the assistant to help the user achieve a target.
3. Sub-topics must be the immediate next level down from {topic}. They should not be too specific or too broad.
4. Each sub-topic must be suitable to act as a parent topic for a further, more detailed breakdown.
5. The sub-topics should be concrete, specific instances or examples that are similar in type and level to the provided examples.
6. The content of the sub-topic should be diverse, not use repeated words.
</Rule>

<Example>
Here are some examples of the sub-topics in this topic. The sub-topics should be at the same level as the examples provided.
{Examples}
</Example>

<Format>
Just return a JSON object with the following structure:
{{"parent_topic": "topic", "topics": ["sub_topic_1", "sub_topic_2", ...]}}
</Format>
)PROEVAL_ASSET";

inline constexpr std::string_view prompt_user_simulator =
    R"PROEVAL_ASSET(<Task>
You are playing the role of a user chatting online with an AI assistant. The assistant has started this conversation proactively. Reply to the assistant's latest message as this user would, in first person, with one short conversational message.
</Task>
<Persona>
user information: {user_information}
situation: {trigger_factor}
</Persona>
<Disposition>
{agreeableness_directive}
</Disposition>
<Conversation>
{conversation}
</Conversation>
<Format>
Return only the user's next message as plain text, with no quotes, labels, or metadata.
</Format>
)PROEVAL_ASSET";

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 16> prompts{{
    {"completion_checker", prompt_completion_checker},
    {"density_count", prompt_density_count},
    {"environment_gen", prompt_environment_gen},
    {"final_check", prompt_final_check},
    {"guidance_assistant", prompt_guidance_assistant},
    {"judge_guidance", prompt_judge_guidance},
    {"judge_planning", prompt_judge_planning},
    {"noise_trigger_factor", prompt_noise_trigger_factor},
    {"noise_user_information", prompt_noise_user_information},
    {"obfuscate_trigger_factor", prompt_obfuscate_trigger_factor},
    {"obfuscate_user_information", prompt_obfuscate_user_information},
    {"similarity_judge", prompt_similarity_judge},
    {"target_ensemble", prompt_target_ensemble},
    {"target_gen", prompt_target_gen},
    {"topic_expand", prompt_topic_expand},
    {"user_simulator", prompt_user_simulator},
}};

inline constexpr std::string_view fixture_ambiguous_instruction =
    R"PROEVAL_ASSET({
  "id": "ambiguous_instruction",
  "description_prompt": "The task is the ambiguous instruction environment, where the assistant will receive an instruction including the unclear and vague elements. The assistant needs to proactively clarify or ask the element rather than respond reactively. The trigger factor is the user's vague instruction.",
  "obfuscation_rule": "Keep the instruction itself short and vague; move concrete detail into the surrounding context without resolving which element the user actually means.",
  "seed_topics": [
    "travel planning",
    "food suggestions",
    "shopping requests",
    "event scheduling",
    "gift ideas",
    "home improvement",
    "entertainment picks",
    "learning resources"
  ],
  "example_environments": [
    {
      "user_information": "The user is a solo traveler planning a two-week trip to Vietnam. She is an adventurous eater and loves exploring local cuisines, especially street food.",
      "trigger_factor": "Suggest street food options."
    }
  ],
  "example_plans": [
    {
      "target": "Understand user's preferences and trip itinerary for food suggestions",
      "sub_targets": [
        "Ask about cities the user plans to visit",
        "Inquire about dietary restrictions or preferences for street food",
        "Clarify the types of street food the user enjoys"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user wants to redecorate their living room but has not decided on a style.",
        "output": "The user's tablet shows 14 saved photos tagged 'living room', split between bare white walls and rooms full of plants and wood shelving. A measuring tape and a folded paint swatch card lie on the user's coffee table, and two browser tabs compare a fabric sofa with a leather one."
      }
    ],
    "trigger_factor": [
      {
        "input": "Help me pick something for the party.",
        "target": "Clarify which party item the user means",
        "output": "At 6:12 p.m. the user typed 'Help me pick something for the party.' The message followed an afternoon in which the user opened a costume shop page, a wine retailer page, and a playlist editor, leaving all three tabs open."
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user is hosting four guests on Friday and asked for a dinner idea.",
        "output": "The user repainted the balcony railing last weekend and photographed the result. On Wednesday the user noted that they are hosting four guests on Friday and asked for a dinner idea, adding a reminder to buy napkins. The user's music app history lists three jazz albums played during cooking, and a library book on bread baking is due next Tuesday."
      }
    ],
    "trigger_factor": [
      {
        "input": "Book me a table somewhere nice.",
        "target": "Clarify the restaurant preferences for the booking",
        "output": "The user's morning messages covered a parcel delivery window and a gym class cancellation. At 5:47 p.m. the user wrote 'Book me a table somewhere nice.' and then sent a photo of a parking garage ticket. Earlier searches in the user's browser include 'rooftop bars', 'quiet bistros', and 'vegan tasting menu'."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Recommend famous Vietnamese street food dishes",
        "sub_targets": [
          "List popular dishes like pho and banh mi",
          "Describe where tourists usually eat them"
        ]
      },
      "reason": "The generated target answers the vague instruction directly instead of clarifying it, which is the opposite of the reference's proactive clarification. Its sub-targets deliver generic dish lists without asking about the user's route, restrictions, or tastes. Because the key ambiguity remains unresolved, the plan misses the point of the environment.",
      "score": 3
    },
    {
      "generated": {
        "target": "Clarify trip details before suggesting street food",
        "sub_targets": [
          "Ask which cities the itinerary includes",
          "Ask about dietary limits or strong dislikes",
          "Confirm preferred street food styles"
        ]
      },
      "reason": "The generated target performs the same clarifying action as the reference with the same scope, differing only in wording. The sub-targets cover cities, dietary restrictions, and food styles, mirroring the reference's decomposition. It is equivalent to the reference, so it scores 9.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::string_view fixture_glasses_assistant =
    R"PROEVAL_ASSET({
  "id": "glasses_assistant",
  "description_prompt": "The task is the smart glass environment, where the user wear the smart glasses and interact in the world. The assistant is in the smart glasses. trigger factor is the either an external event the user perceives (e.g., sights, sounds) or the user's own state/behavior at that moment, which prompts the assistant to proactively initiate a conversation.",
  "obfuscation_rule": "Describe only what the glasses' camera and microphone could capture from the first-person view, as timestamped visual and audio observations.",
  "seed_topics": [
    "city landmarks",
    "commuting",
    "grocery shopping",
    "museum visits",
    "outdoor exercise",
    "cooking at home",
    "social gatherings",
    "workplace tasks"
  ],
  "example_environments": [
    {
      "user_information": "The user is a 26-year-old urban planner who recently started using smart glasses to enhance his productivity and creativity. He is passionate about sustainable city designs and often visits local landmarks for inspiration. He lives alone in an apartment downtown and enjoys cycling to work. He is currently working on a proposal for a new park project.",
      "trigger_factor": "The user is cycling along a busy street and notices a newly built skyscraper with unique architectural features."
    }
  ],
  "example_plans": [
    {
      "target": "Draw sustainable inspiration from skyscraper for park",
      "sub_targets": [
        "Highlight skyscraper's notable architecture and features",
        "Identify sustainable design aspects of the skyscraper",
        "Relate these aspects to the proposed park project"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user is a keen home cook who struggles with knife technique.",
        "output": "The camera frame at 18:44 shows a cutting board with unevenly sized onion pieces, a chef's knife held with the index finger on the spine, and a phone propped against a jar playing a paused cooking video. Three bandage wrappers lie next to the sink, and a knife-skills book stands open on a stand at page 12."
      }
    ],
    "trigger_factor": [
      {
        "input": "The user pauses in front of a mural they pass every day.",
        "target": "Share background of the neighborhood mural",
        "output": "At 08:21 the forward camera holds steady for 40 seconds on a three-story mural of migrating cranes at the corner of Ash Lane, with the artist's signature 'R. Vela 2023' in the lower right of the frame. The microphone picks up the user saying 'huh, new colors' while the head tilts upward along the wall."
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user is training for a half marathon along the river path.",
        "output": "The glasses log morning frames of a kettle, a calendar page with a dentist note, and a fern on the windowsill. Running sessions appear on the river path four mornings a week, with pace overlays between 5:40 and 6:10 per kilometer as the user trains for a half marathon. Midday captures include a sandwich shop queue and a parcel locker screen, and the evening log records a phone call about weekend plans."
      }
    ],
    "trigger_factor": [
      {
        "input": "The user stops at a farmers market stall selling heirloom tomatoes.",
        "target": "Suggest heirloom tomato recipes from the market",
        "output": "The 10:05 frame pans across a street musician tuning a guitar and a dog tied near a fountain. At 10:09 the user stops at a farmers market stall selling heirloom tomatoes, and the camera lingers on a crate labeled 'Green Zebra'. The microphone then records a church bell and a vendor at the next stall calling out prices for basil bunches."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Tell the user about the skyscraper",
        "sub_targets": [
          "Describe the skyscraper's height and location",
          "List other tall buildings nearby"
        ]
      },
      "reason": "The generated target stops at describing the skyscraper and never connects it to the user's park proposal, which is the point of the reference. Its sub-targets drift to unrelated buildings instead of sustainable design aspects. The action loses the user-specific purpose, so the plan is clearly weaker than the reference.",
      "score": 4
    },
    {
      "generated": {
        "target": "Link skyscraper design ideas to park proposal",
        "sub_targets": [
          "Point out the building's distinctive features",
          "Extract its sustainable design elements",
          "Apply those elements to the park plan"
        ]
      },
      "reason": "The generated target takes the same action as the reference, turning the observed skyscraper into input for the user's park project. The sub-targets follow the identical progression from observation to application. It matches the reference without surpassing it, scoring 9.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::string_view fixture_long_term_follow_up =
    R"PROEVAL_ASSET({
  "id": "long_term_follow_up",
  "description_prompt": "The task is a long-term environment, where the assistant will receive a past conversation history that includes the user's persistent state or ongoing condition. The assistant needs to proactively follow up or care user's current state, and give some advice or remind to the user. The trigger factor is the past conversation history.",
  "obfuscation_rule": "Render prior history as dated message logs with explicit timestamps and speakers rather than summaries of what was discussed.",
  "seed_topics": [
    "study progress",
    "cooking practice",
    "job applications",
    "fitness goals",
    "recovery from illness",
    "project deadlines",
    "habit changes",
    "family events"
  ],
  "example_environments": [
    {
      "user_information": "The user is a college student studying computer science. He has a part-time job as a barista at a local cafe. He recently started learning to cook and enjoys trying out new recipes during the weekends.",
      "trigger_factor": "A conversation happened last Wednesday. Now is Monday 10:00 a.m. User: \"I'm thinking of quitting video games for a while to focus on my studies and cooking. It's a bit challenging though.\" Assistant: \"It's great that you're focusing on your studies and hobbies. Maybe you can set small goals and gradually reduce your game time.\" User: \"That's a good idea. I'll try to set a schedule.\""
    }
  ],
  "example_plans": [
    {
      "target": "Ask about quitting games and new schedule",
      "sub_targets": [
        "Ask about quitting video games progress",
        "Inquire about schedule-setting progress",
        "Encourage focusing on studies and cooking"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user is recovering from a sprained ankle and misses morning runs.",
        "output": "The user's calendar lists physiotherapy sessions on Mondays and Thursdays at 8:00 a.m., booked through the 28th. A running app on the user's phone shows a 212-day streak that stopped on the 3rd, and a pair of trail shoes sits by the door with the laces still knotted."
      }
    ],
    "trigger_factor": [
      {
        "input": "Two weeks ago the user said they would practice guitar daily before their cousin's wedding.",
        "target": "Follow up on daily guitar practice progress",
        "output": "A conversation happened two weeks ago, on the 9th at 8:32 p.m. Now is the 23rd, 7:00 p.m. User: \"My cousin's wedding is in six weeks and I promised to play a song. I'll practice guitar every evening.\" Assistant: \"Recording yourself once a week can help you track the practice.\" User: \"Good call, I'll start tonight after dinner.\""
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user started a part-time evening course in data analysis last month.",
        "output": "The user adopted a cat named Miso in the spring and posts photos of it most weekends. Since last month the user attends a part-time evening course in data analysis, with classes on Tuesday and Thursday. The user also swapped a desk chair for a standing desk in the same period and keeps a water bottle with time markings next to the keyboard."
      }
    ],
    "trigger_factor": [
      {
        "input": "Last Friday the user said they would submit three job applications by Sunday.",
        "target": "Check on the three job applications",
        "output": "Last Thursday the user mentioned repotting two ferns and asked about train times to the coast. Then last Friday the user said they would submit three job applications by Sunday, right after a remark about printer ink running low. Over the weekend the user also shared a photo of a finished jigsaw puzzle and asked for a pancake recipe."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Give the user study tips for computer science",
        "sub_targets": [
          "Share general studying techniques",
          "Recommend computer science learning resources"
        ]
      },
      "reason": "The generated target ignores the pending thread from last Wednesday's conversation, the game-quitting plan and the schedule the user promised to set. Instead of following up on the user's stated commitments it pushes unsolicited study advice, losing the continuity the environment requires. The action and entities differ substantially from the reference.",
      "score": 3
    },
    {
      "generated": {
        "target": "Follow up on game quitting and schedule",
        "sub_targets": [
          "Ask how reducing game time is going",
          "Ask whether the schedule was set",
          "Encourage the focus on studies and cooking"
        ]
      },
      "reason": "The generated target performs the same follow-up action on the same two commitments as the reference, quitting games and setting a schedule. Its sub-targets track the reference's progression including the closing encouragement. Equivalent to the reference, it earns a 9.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::string_view fixture_persuasion =
    R"PROEVAL_ASSET({
  "id": "persuasion",
  "description_prompt": "The task is the persuasion environment, where the assistant should persuade the user to change the state based on user's challenges and assistant's experience. The trigger factor is assistant's knowledge, ability, and experience.",
  "obfuscation_rule": "Present the user's challenge as dated concrete incidents with amounts, places, and times, without naming the habit to be changed or judging the behavior.",
  "seed_topics": [
    "budgeting habits",
    "healthy eating",
    "exercise routines",
    "screen time",
    "sleep schedule",
    "study habits",
    "saving money",
    "recycling at home"
  ],
  "example_environments": [
    {
      "user_information": "The user is frequently tempted by impulse purchases and often exceeds their budget limits. They find budgeting tedious and restrictive.",
      "trigger_factor": "The assistant has recently learned effective budgeting techniques that can help the user manage their finances better without feeling constrained."
    }
  ],
  "example_plans": [
    {
      "target": "Encourage effective and enjoyable budgeting techniques",
      "sub_targets": [
        "Acknowledge the user's struggles with impulse purchases and budgeting",
        "Introduce flexible and engaging budgeting methods",
        "Show the benefits in managing finances without restrictions",
        "Offer simple steps or tools to start budgeting effectively"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user stays up too late scrolling on their phone and feels tired at work.",
        "output": "Screen-time reports for the past two weeks show the user's phone active from 11:40 p.m. to 1:50 a.m. on nine nights, mostly in short-video apps. Badge records at the user's office list four arrivals after 9:30 a.m. in the same period, and the desk calendar shows two afternoon meetings rescheduled."
      }
    ],
    "trigger_factor": [
      {
        "input": "The assistant knows proven techniques for winding down before bed.",
        "target": "Encourage a consistent wind-down routine before sleep",
        "output": "At 9:00 p.m. the assistant's routine log records a repeating sequence: screens off, a 15-minute paper-book chapter, and a timed lamp dimming at 10:30 p.m. The log covers 21 consecutive days, and the linked watch data lists sleep onset within 20 minutes of lights-out on 18 of them."
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user orders takeout most evenings and rarely cooks at home.",
        "output": "The user keeps a balcony garden with three tomato plants and waters them each morning. Delivery receipts show the user orders takeout most evenings, often from the same two restaurants. The user rarely cooks at home, and a kitchen-scale box on the shelf remains unopened since January. A cycling app on the user's phone logs a 20-minute ride on Saturdays."
      }
    ],
    "trigger_factor": [
      {
        "input": "The assistant completed a beginner meal-prep course and can share simple weekly plans.",
        "target": "Persuade the user to try weekly meal prepping",
        "output": "The assistant reorganized a photo library on Sunday and archived two old podcast subscriptions. During the same week the assistant completed a beginner meal-prep course and can share simple weekly plans, storing the recipe cards in a notes app. The assistant also renewed a transit pass and compared prices for a desk lamp across three shops."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Tell the user to stop buying things impulsively",
        "sub_targets": [
          "List the dangers of impulse purchases",
          "Tell the user to make a strict budget"
        ]
      },
      "reason": "The generated target frames the action as a blunt demand rather than the reference's encouragement of enjoyable budgeting techniques, losing the supportive framing the environment calls for. Its sub-targets lecture the user and prescribe exactly the strictness the user finds tedious, with no use of the assistant's newly learned techniques. The plan conflicts with the user's stated aversion, so it scores low.",
      "score": 2
    },
    {
      "generated": {
        "target": "Encourage effective and enjoyable budgeting techniques",
        "sub_targets": [
          "Acknowledge the user's struggles with impulse purchases and budgeting",
          "Introduce flexible and engaging budgeting methods",
          "Show the benefits in managing finances without restrictions",
          "Offer simple steps or tools to start budgeting effectively"
        ]
      },
      "reason": "The generated target repeats the reference action and framing, encouraging budgeting methods that feel enjoyable rather than restrictive. The sub-targets cover the same empathetic opening, concrete methods, benefits, and first steps. Matching the reference without exceeding it, it receives a 9.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::string_view fixture_recommendation =
    R"PROEVAL_ASSET({
  "id": "recommendation",
  "description_prompt": "The task is the product recommendation environment, where the assistant and the user have some habits and perferences. The trigger factor is assistant's self habits, preferences. The assistant should identify the common interest and recommend something to the user.",
  "obfuscation_rule": "Describe the user's tastes through observable records such as purchases, playlists, ticket stubs, browsing history, or attended events, never as stated likes or dislikes.",
  "seed_topics": [
    "music experiences",
    "art exhibitions",
    "books and reading",
    "travel destinations",
    "food and dining",
    "technology gadgets",
    "fitness activities",
    "hobby equipment"
  ],
  "example_environments": [
    {
      "user_information": "The user is a 32-year-old woman living in Hangzhou. She works as a graphic designer and enjoys exploring new art exhibitions in her free time. She loves experimental music, particularly electronic avant-garde, and often attends live performances at local venues. She dislikes mainstream pop music and prefers unique, unconventional sounds. Her favorite artist is Ryuichi Sakamoto, and she often reads about the intersection of music and technology.",
      "trigger_factor": "The assistant recently attended a virtual reality music experience at an art gallery, which featured an experimental electronic avant-garde performance. The event combined immersive visuals with cutting-edge sound design, leaving a lasting impression on the assistant."
    }
  ],
  "example_plans": [
    {
      "target": "Recommend experimental virtual reality music experience",
      "sub_targets": [
        "Ask about the user's interest in music technology",
        "Describe the assistant's recent immersive VR music event",
        "Highlight the fusion of visuals and avant-garde music",
        "Suggest attending similar VR experiences locally"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user loves jazz music and often goes to small concerts after work.",
        "output": "The user's streaming history for March lists 46 plays of Bill Evans and Art Blakey albums, most between 9 p.m. and 11 p.m. on weekdays. Ticket confirmations for the Blue Door Club on March 7 and March 21 appear in the user's mailbox, each for a single seat near the stage."
      }
    ],
    "trigger_factor": [
      {
        "input": "The assistant recently discovered a great new coffee roastery downtown.",
        "target": "Recommend the new downtown coffee roastery",
        "output": "On Saturday at 10:15 a.m. the assistant's activity log records a visit to Ember Roastery at 12 Canal Street, an order of a single-origin Ethiopian pour-over, and a photo of the roasting machine posted to the assistant's feed at 10:42 a.m."
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user collects vinyl records and visits the flea market every Sunday.",
        "output": "The user renewed a gym membership last Tuesday and keeps a shared shopping list with a roommate. The user collects vinyl records and bought a secondhand bicycle lamp two weeks ago. The user visits the flea market every Sunday, sometimes stopping at the bakery next to the market entrance. A calendar reminder for a dentist appointment on the 14th repeats monthly."
      }
    ],
    "trigger_factor": [
      {
        "input": "The assistant attended a pottery workshop and learned hand-building techniques.",
        "target": "Recommend a pottery workshop",
        "output": "The assistant spent the morning reading release notes for a mapping app and answered two messages about a carpool schedule. In the afternoon the assistant attended a pottery workshop and learned hand-building techniques, taking notes on clay temperatures. Afterwards the assistant browsed a thread about houseplant care and bookmarked a recipe for lentil soup."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Recommend some new music to the user",
        "sub_targets": [
          "Ask what music the user likes",
          "Recommend popular new songs"
        ]
      },
      "reason": "The generated target is generic and drops the specific entity of the reference, the virtual reality music experience that triggered the dialogue. Its sub-targets ignore the user's documented taste for experimental electronic music and offer mainstream suggestions she dislikes. The plan neither uses the trigger factor nor personalizes the recommendation, so it is far below the reference.",
      "score": 3
    },
    {
      "generated": {
        "target": "Recommend experimental virtual reality music experience",
        "sub_targets": [
          "Ask about the user's interest in music technology",
          "Describe the assistant's recent immersive VR music event",
          "Highlight the fusion of visuals and avant-garde music",
          "Suggest attending similar VR experiences locally"
        ]
      },
      "reason": "The generated target matches the reference action and entity exactly, recommending the experimental VR music experience from the trigger factor. The sub-targets follow the same interactive progression from interest check to concrete suggestion. Since it equals but does not surpass the reference, it earns a 9 rather than a 10.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::string_view fixture_system_operation =
    R"PROEVAL_ASSET({
  "id": "system_operation",
  "description_prompt": "The task is the system operation environment, where the user operate a computer and assistant observe it. The assistant needs to identify user's challenges and give proactive operation assistance. The trigger factor is the specific sequence of operation behaviors currently captured by the user, reflecting the challenges and problems the user faces.",
  "obfuscation_rule": "Express everything as logged UI events, shell commands, window titles, and timestamps in chronological order, without naming the underlying problem.",
  "seed_topics": [
    "web browsing",
    "file management",
    "software installation",
    "gaming setup",
    "spreadsheet editing",
    "video playback",
    "email handling",
    "system settings"
  ],
  "example_environments": [
    {
      "user_information": "The user is playing a strategy game on their PC and has paused the game to look for tips online, using Chrome and YouTube.",
      "trigger_factor": "The user searched 'best strategies for Civilization VI' on Google, opened two blog posts, and started a YouTube video but paused it after 10 seconds."
    }
  ],
  "example_plans": [
    {
      "target": "Suggest optimal Civilization VI strategy resources",
      "sub_targets": [
        "Summarize key tactics from blog posts",
        "Highlight vital points in video analysis",
        "Recommend further high-rated resources"
      ]
    }
  ],
  "rewrite_examples": {
    "user_information": [
      {
        "input": "The user is trying to free up disk space on an old laptop.",
        "output": "The user's machine reports 4.2 GB free of 256 GB. In the last 20 minutes the event log lists: Settings > Storage opened twice, a folder sort by size in C:\\Users\\Downloads, deletion of three .zip archives totaling 1.1 GB, and an empty Recycle Bin action at 14:37."
      }
    ],
    "trigger_factor": [
      {
        "input": "The user keeps failing to connect their new wireless headphones.",
        "target": "Guide Bluetooth pairing for the headphones",
        "output": "Between 19:02 and 19:11 the log records: Bluetooth settings opened four times, device scan started three times, an entry 'AeroPods Pro' appearing and disappearing twice, a click on 'Pair' followed by the dialog 'Connection failed' at 19:06 and 19:09, and a browser search for 'AeroPods blinking white light'."
      }
    ]
  },
  "noise_examples": {
    "user_information": [
      {
        "input": "The user is editing a quarterly budget spreadsheet with broken formula references.",
        "output": "The user's desktop shows a music player in the corner cycling a lo-fi playlist and a chat app with two unread messages. In the main window the user is editing a quarterly budget spreadsheet where several cells display #REF! errors after a column deletion. A calendar notification for a 3 p.m. standup slides in and is dismissed, and a weather widget updates in the taskbar."
      }
    ],
    "trigger_factor": [
      {
        "input": "The user ran the installer twice and both runs ended with error code 0x80070005.",
        "target": "Resolve installer permission error 0x80070005",
        "output": "At 10:02 the user emptied the browser download list and pinned a note-taking app to the taskbar. At 10:05 and again at 10:09 the user ran the installer, and both runs ended with error code 0x80070005 in the final dialog. Between the two runs the user resized the file explorer window, renamed a screenshots folder, and muted a notification from a shopping site."
      }
    ]
  },
  "judge_shots": [
    {
      "generated": {
        "target": "Help the user play the game better",
        "sub_targets": [
          "Offer to answer game questions",
          "Suggest searching online for tips"
        ]
      },
      "reason": "The generated target is vague and drops the concrete entities of the reference, the Civilization VI resources already opened in the browser. Its sub-targets tell the user to do what they are already doing, searching online, and summarize nothing from the captured operations. The plan offers no operational assistance grounded in the observed behavior.",
      "score": 2
    },
    {
      "generated": {
        "target": "Curate the opened Civilization VI strategy materials",
        "sub_targets": [
          "Summarize the two opened blog posts",
          "Point out key segments of the paused video",
          "Offer additional well-rated strategy guides"
        ]
      },
      "reason": "The generated target carries out the same action as the reference on the same materials, the blog posts and paused video from the trigger. Its sub-targets mirror the reference steps including the follow-up resource suggestion. It is an equivalent plan and scores 9.",
      "score": 9
    }
  ]
}
)PROEVAL_ASSET";

inline constexpr std::array<std::pair<std::string_view, std::string_view>, 6> fixtures{{
    {"ambiguous_instruction", fixture_ambiguous_instruction},
    {"glasses_assistant", fixture_glasses_assistant},
    {"long_term_follow_up", fixture_long_term_follow_up},
    {"persuasion", fixture_persuasion},
    {"recommendation", fixture_recommendation},
    {"system_operation", fixture_system_operation},
}};

}  // namespace proeval::asset_data
